#include "heatseek/components.hpp"

#include <algorithm>

#include "heatseek/error.hpp"

namespace heatseek {

Box2D Component::bbox() const {
  return {static_cast<double>(min_x), static_cast<double>(min_y),
          static_cast<double>(max_x - min_x + 1), static_cast<double>(max_y - min_y + 1)};
}

Point2D Component::centroid() const {
  const auto n = static_cast<double>(pixels.size());
  return {sum_x / n, sum_y / n};
}

std::vector<Component> label_components(int width, int height, std::span<const std::uint8_t> bits) {
  const std::size_t total = static_cast<std::size_t>(width) * height;
  if (bits.size() != total) throw Error("mask size does not match dimensions");

  std::vector<std::uint8_t> seen(total, 0);
  std::vector<std::size_t> stack;
  std::vector<Component> out;

  for (std::size_t start = 0; start < total; ++start) {
    if (!bits[start] || seen[start]) continue;
    Component comp;
    comp.min_x = comp.max_x = static_cast<int>(start % width);
    comp.min_y = comp.max_y = static_cast<int>(start / width);
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(idx % width);
      const int y = static_cast<int>(idx / width);
      comp.pixels.push_back(idx);
      comp.min_x = std::min(comp.min_x, x);
      comp.max_x = std::max(comp.max_x, x);
      comp.min_y = std::min(comp.min_y, y);
      comp.max_y = std::max(comp.max_y, y);
      comp.sum_x += x + 0.5;
      comp.sum_y += y + 0.5;
      for (int dy = -1; dy <= 1; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= height) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          if ((dx == 0 && dy == 0) || nx < 0 || nx >= width) continue;
          const std::size_t n = static_cast<std::size_t>(ny) * width + nx;
          if (bits[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace heatseek
