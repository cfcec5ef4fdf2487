#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "heatseek/image.hpp"

namespace heatseek::io {

// 8-bit PNG, gray or RGB (palette and alpha are converted). Intensities are
// normalized to [0, 1].
ImageGrid load_png(const std::filesystem::path& path);
void save_png(const ImageGrid& image, const std::filesystem::path& path);

// 1-bit grayscale PNG, set bits white.
void save_mask_png(int width, int height, std::span<const std::uint8_t> bits,
                   const std::filesystem::path& path);

// Linear raw-count to Celsius mapping for 16-bit thermal PNGs, stored in a
// sidecar "<image>.json" as {"offset": o, "scale": s}: temp = offset + scale * raw.
struct RawTempMapping {
  double offset = 0.0;
  double scale = 1.0;
};

std::filesystem::path sidecar_path(const std::filesystem::path& png_path);

ThermalGrid load_thermal_png16(const std::filesystem::path& path, const SensorDescriptor& meta = {});
void save_thermal_png16(const ThermalGrid& grid, const RawTempMapping& mapping,
                        const std::filesystem::path& path);

// CSV of Celsius values, one image row per line.
ThermalGrid load_thermal_csv(const std::filesystem::path& path, const SensorDescriptor& meta = {});
void save_thermal_csv(const ThermalGrid& grid, const std::filesystem::path& path);

// Dispatches on extension: ".csv" or ".png".
ThermalGrid load_thermal(const std::filesystem::path& path, const SensorDescriptor& meta = {});

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

}  // namespace heatseek::io
