#include "heatseek/io.hpp"

#include <png.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "heatseek/error.hpp"

namespace heatseek::io {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error("cannot open file: " + path.string());
  return f;
}

[[noreturn]] void png_error_fn(png_structp, png_const_charp msg) { throw Error(std::string("png: ") + msg); }
void png_warning_fn(png_structp, png_const_charp) {}

struct PngRead {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::vector<png_byte>> rows;
};

// Decodes to 8-bit gray/RGB, or keeps 16-bit gray when keep16 is set.
PngRead read_png(const fs::path& path, bool keep16) {
  auto file = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw Error("not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_read_struct(p, i, nullptr); }
  } guard{&png, &info};

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16 && !keep16) png_set_strip_16(png);
  if (depth == 16 && keep16) png_set_swap(png);  // little-endian host order
  png_read_update_info(png, info);

  PngRead out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out.rows.assign(out.height, std::vector<png_byte>(rowbytes));
  std::vector<png_bytep> ptrs(out.height);
  for (int y = 0; y < out.height; ++y) ptrs[y] = out.rows[y].data();
  png_read_image(png, ptrs.data());
  png_read_end(png, nullptr);
  return out;
}

void write_png(const fs::path& path, int width, int height, int bit_depth, int color_type,
               const std::vector<std::vector<png_byte>>& rows) {
  auto file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_write_struct(p, i); }
  } guard{&png, &info};

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  for (const auto& row : rows) png_write_row(png, row.data());
  png_write_end(png, nullptr);
}

double parse_double(std::string_view s, const fs::path& path, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(path.string() + ":" + std::to_string(line) + ": invalid number '" + std::string(s) + "'");
  return v;
}

}  // namespace

ImageGrid load_png(const fs::path& path) {
  const PngRead raw = read_png(path, false);
  if (raw.channels != 1 && raw.channels != 3) throw Error("unsupported PNG channel layout: " + path.string());
  std::vector<float> samples;
  samples.reserve(static_cast<std::size_t>(raw.width) * raw.height * raw.channels);
  for (const auto& row : raw.rows)
    for (std::size_t i = 0; i < static_cast<std::size_t>(raw.width) * raw.channels; ++i)
      samples.push_back(static_cast<float>(row[i]) / 255.0f);
  return ImageGrid(raw.width, raw.height, raw.channels, std::move(samples));
}

void save_png(const ImageGrid& image, const fs::path& path) {
  const int w = image.width(), c = image.channels();
  std::vector<std::vector<png_byte>> rows(image.height(), std::vector<png_byte>(static_cast<std::size_t>(w) * c));
  const auto s = image.samples();
  for (int y = 0; y < image.height(); ++y)
    for (int i = 0; i < w * c; ++i)
      rows[y][i] = static_cast<png_byte>(std::lround(s[static_cast<std::size_t>(y) * w * c + i] * 255.0f));
  write_png(path, w, image.height(), 8, c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, rows);
}

void save_mask_png(int width, int height, std::span<const std::uint8_t> bits, const fs::path& path) {
  if (bits.size() != static_cast<std::size_t>(width) * height) throw Error("mask size does not match dimensions");
  std::vector<std::vector<png_byte>> rows(height, std::vector<png_byte>((width + 7) / 8, 0));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (bits[static_cast<std::size_t>(y) * width + x]) rows[y][x / 8] |= static_cast<png_byte>(0x80 >> (x % 8));
  write_png(path, width, height, 1, PNG_COLOR_TYPE_GRAY, rows);
}

fs::path sidecar_path(const fs::path& png_path) {
  fs::path p = png_path;
  p += ".json";
  return p;
}

ThermalGrid load_thermal_png16(const fs::path& path, const SensorDescriptor& meta) {
  const auto side = sidecar_path(path);
  if (!fs::exists(side)) throw Error("missing thermal sidecar: " + side.string());
  RawTempMapping mapping;
  try {
    const auto j = nlohmann::json::parse(read_text(side));
    mapping.offset = j.at("offset").get<double>();
    mapping.scale = j.at("scale").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid thermal sidecar " + side.string() + ": " + e.what());
  }
  const PngRead raw = read_png(path, true);
  if (raw.channels != 1 || raw.bit_depth != 16) throw Error("thermal PNG must be 16-bit single channel: " + path.string());
  std::vector<double> temps;
  temps.reserve(static_cast<std::size_t>(raw.width) * raw.height);
  for (const auto& row : raw.rows)
    for (int x = 0; x < raw.width; ++x) {
      const unsigned v = row[2 * x] | (static_cast<unsigned>(row[2 * x + 1]) << 8);
      temps.push_back(mapping.offset + mapping.scale * v);
    }
  return ThermalGrid(raw.width, raw.height, std::move(temps), meta);
}

void save_thermal_png16(const ThermalGrid& grid, const RawTempMapping& mapping, const fs::path& path) {
  if (!(mapping.scale > 0.0)) throw Error("thermal PNG scale must be positive");
  const int w = grid.width();
  std::vector<std::vector<png_byte>> rows(grid.height(), std::vector<png_byte>(static_cast<std::size_t>(w) * 2));
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < w; ++x) {
      const long raw = std::lround((grid.at(x, y) - mapping.offset) / mapping.scale);
      if (raw < 0 || raw > 65535) throw Error("temperature not representable with the given mapping");
      rows[y][2 * x] = static_cast<png_byte>(raw & 0xff);
      rows[y][2 * x + 1] = static_cast<png_byte>(raw >> 8);
    }
  write_png(path, w, grid.height(), 16, PNG_COLOR_TYPE_GRAY, rows);
  nlohmann::ordered_json side{{"offset", mapping.offset}, {"scale", mapping.scale}};
  write_text(sidecar_path(path), side.dump(2) + "\n");
}

ThermalGrid load_thermal_csv(const fs::path& path, const SensorDescriptor& meta) {
  std::istringstream in(read_text(path));
  std::vector<double> temps;
  int width = -1, height = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    int count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      temps.push_back(parse_double(rest.substr(0, comma), path, lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (width < 0) width = count;
    else if (count != width) throw Error(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    ++height;
  }
  if (height == 0) throw Error("empty thermal CSV: " + path.string());
  return ThermalGrid(width, height, std::move(temps), meta);
}

void save_thermal_csv(const ThermalGrid& grid, const fs::path& path) {
  std::string out;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (x) out += ',';
      out += format_double(grid.at(x, y));
    }
    out += '\n';
  }
  write_text(path, out);
}

ThermalGrid load_thermal(const fs::path& path, const SensorDescriptor& meta) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return load_thermal_csv(path, meta);
  if (ext == ".png") return load_thermal_png16(path, meta);
  throw Error("unsupported thermal file type: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace heatseek::io
