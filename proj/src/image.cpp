#include "heatseek/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatseek/error.hpp"

namespace heatseek {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) throw Error("grid dimensions must be at least 1x1");
}

}  // namespace

ImageGrid::ImageGrid(int width, int height, int channels, float fill)
    : ImageGrid(width, height, channels,
                std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                                       std::max(height, 0) * std::max(channels, 0),
                                   fill)) {}

ImageGrid::ImageGrid(int width, int height, int channels, std::vector<float> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) throw Error("image must have 1 or 3 channels");
  if (samples_.size() != static_cast<std::size_t>(width) * height * channels)
    throw Error("image sample count does not match dimensions");
  for (float v : samples_)
    if (!(v >= 0.0f && v <= 1.0f)) throw Error("image intensity outside [0,1]");
}

double ImageGrid::luma(int x, int y) const {
  if (channels_ == 1) return at(x, y);
  return 0.299 * at(x, y, 0) + 0.587 * at(x, y, 1) + 0.114 * at(x, y, 2);
}

ThermalGrid::ThermalGrid(int width, int height, std::vector<double> temps, SensorDescriptor meta)
    : width_(width), height_(height), temps_(std::move(temps)), meta_(std::move(meta)) {
  check_dims(width, height);
  if (temps_.size() != static_cast<std::size_t>(width) * height)
    throw Error("thermal sample count does not match dimensions");
  for (std::size_t i = 0; i < temps_.size(); ++i) {
    const double t = temps_[i];
    if (!std::isfinite(t) || t < meta_.plausible_min_c || t > meta_.plausible_max_c)
      throw Error("thermal sample " + std::to_string(i) + " outside plausible range");
  }
}

ThermalGrid::ThermalGrid(int width, int height, double fill, SensorDescriptor meta)
    : ThermalGrid(width, height,
                  std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                          std::max(height, 0),
                                      fill),
                  std::move(meta)) {}

double ThermalGrid::min() const { return *std::min_element(temps_.begin(), temps_.end()); }
double ThermalGrid::max() const { return *std::max_element(temps_.begin(), temps_.end()); }
double ThermalGrid::median() const { return median_of(temps_); }

double median_of(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double mad_sigma(std::span<const double> values, double median) {
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(),
                 [median](double v) { return std::abs(v - median); });
  return 1.4826 * median_of(std::move(dev));
}

}  // namespace heatseek
