#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace heatseek {

// Row-major image with 1 (gray) or 3 (RGB) interleaved channels, intensities in [0, 1].
class ImageGrid {
 public:
  ImageGrid(int width, int height, int channels, float fill = 0.0f);
  ImageGrid(int width, int height, int channels, std::vector<float> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::span<const float> samples() const { return samples_; }
  std::span<float> samples() { return samples_; }

  float at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }
  float& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }

  // Rec. 601 luma for RGB, the sample itself for gray.
  double luma(int x, int y) const;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_;
  int height_;
  int channels_;
  std::vector<float> samples_;
};

struct SensorDescriptor {
  std::string name = "FLIR Lepton 80x60";
  double spectral_min_um = 8.0;
  double spectral_max_um = 14.0;
  double plausible_min_c = -40.0;
  double plausible_max_c = 400.0;

  friend bool operator==(const SensorDescriptor&, const SensorDescriptor&) = default;
};

// Row-major grid of temperatures in degrees Celsius. Every sample is checked
// against the plausible range of the sensor descriptor at construction.
class ThermalGrid {
 public:
  ThermalGrid(int width, int height, std::vector<double> temps, SensorDescriptor meta = {});
  ThermalGrid(int width, int height, double fill, SensorDescriptor meta = {});

  int width() const { return width_; }
  int height() const { return height_; }
  const SensorDescriptor& meta() const { return meta_; }
  std::span<const double> temps() const { return temps_; }

  double at(int x, int y) const { return temps_[static_cast<std::size_t>(y) * width_ + x]; }

  double min() const;
  double max() const;
  double median() const;

  friend bool operator==(const ThermalGrid&, const ThermalGrid&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> temps_;
  SensorDescriptor meta_;
};

// Median of a sample set (mean of the two middle values for even counts).
double median_of(std::vector<double> values);
// Median absolute deviation scaled by 1.4826.
double mad_sigma(std::span<const double> values, double median);

}  // namespace heatseek
