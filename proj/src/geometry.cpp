#include "heatseek/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "heatseek/error.hpp"

namespace heatseek {

bool is_finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool is_valid(const Box2D& b) {
  return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) && std::isfinite(b.h) &&
         b.w >= 0.0 && b.h >= 0.0;
}

void validate(const Box2D& b) {
  if (!is_valid(b)) throw Error("invalid box: fields must be finite with non-negative extent");
}

double intersection_area(const Box2D& a, const Box2D& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const Box2D& a, const Box2D& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool box_contains(const Box2D& b, const Point2D& p) {
  return b.x <= p.x && p.x < b.right() && b.y <= p.y && p.y < b.bottom();
}

Box2D box_union_bounds(std::span<const Box2D> boxes) {
  if (boxes.empty()) throw Error("empty box set");
  double x0 = boxes.front().x, y0 = boxes.front().y;
  double x1 = boxes.front().right(), y1 = boxes.front().bottom();
  for (const auto& b : boxes.subspan(1)) {
    x0 = std::min(x0, b.x);
    y0 = std::min(y0, b.y);
    x1 = std::max(x1, b.right());
    y1 = std::max(y1, b.bottom());
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

Box2D scaled(const Box2D& b, double factor) {
  return {b.x * factor, b.y * factor, b.w * factor, b.h * factor};
}

Box2D dilated(const Box2D& b, double margin) {
  return {b.x - margin, b.y - margin, b.w + 2.0 * margin, b.h + 2.0 * margin};
}

}  // namespace heatseek
