#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "heatseek/geometry.hpp"

namespace heatseek {

// One 8-connected component of set pixels.
struct Component {
  std::vector<std::size_t> pixels;  // row-major indices, in discovery order
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double sum_x = 0.0, sum_y = 0.0;  // sums of pixel-center coordinates

  std::size_t size() const { return pixels.size(); }
  // Covers the member pixels [min_x, max_x + 1) x [min_y, max_y + 1).
  Box2D bbox() const;
  // Mean of member pixel centers (x + 0.5, y + 0.5).
  Point2D centroid() const;
};

// 8-connected labeling of a binary raster. Components come out in the raster
// order of their first (top-most, then left-most) pixel.
std::vector<Component> label_components(int width, int height, std::span<const std::uint8_t> bits);

}  // namespace heatseek
