#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatseek/geometry.hpp"
#include "heatseek/image.hpp"

namespace heatseek {

enum class ThresholdMode {
  kAbsolute,     // param is the cutoff in degrees Celsius
  kRobustSigma,  // cutoff = median + param * MAD-sigma
};

struct ThresholdSpec {
  ThresholdMode mode = ThresholdMode::kRobustSigma;
  double param = 6.0;
};

// Cutoff used by robust-sigma mode when the MAD-sigma of the grid is zero.
inline constexpr double kFlatBackgroundOffsetC = 1.0;
inline constexpr int kDefaultMinContourArea = 4;

struct HeatMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, 0 or 1
  double threshold_used = 0.0;     // degrees Celsius

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

struct HeatContour {
  int id = 0;
  std::size_t pixel_count = 0;
  Point2D centroid;
  Box2D bbox;
  double peak_temp = 0.0;
};

double threshold_cutoff(const ThermalGrid& t, const ThresholdSpec& spec);

/// A bit is set where the sample is strictly above the cutoff.
HeatMask threshold_mask(const ThermalGrid& t, const ThresholdSpec& spec);

/// 8-connected components of at least `min_area` pixels, largest first, ties
/// broken by ascending (bbox.y, bbox.x). Ids are ranks in that order.
/// `source` supplies peak temperatures and must match the mask dimensions.
std::vector<HeatContour> extract_contours(const HeatMask& m, const ThermalGrid& source, int min_area);

// JSON records with every contour field.
std::string contours_to_json(std::span<const HeatContour> contours);

}  // namespace heatseek
