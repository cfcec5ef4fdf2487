#pragma once

#include <span>

namespace heatseek {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

// Axis-aligned rectangle, top-left corner plus extent. Covers the half-open
// region [x, x + w) x [y, y + h).
struct Box2D {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  Point2D center() const { return {x + 0.5 * w, y + 0.5 * h}; }

  friend bool operator==(const Box2D&, const Box2D&) = default;
};

bool is_finite(const Point2D& p);
// Finite fields and non-negative extent.
bool is_valid(const Box2D& b);
// Throws Error if the box breaks its invariants.
void validate(const Box2D& b);

double intersection_area(const Box2D& a, const Box2D& b);

/// Intersection over union on continuous areas. Zero when the union is empty.
double iou(const Box2D& a, const Box2D& b);

bool box_contains(const Box2D& b, const Point2D& p);

/// Smallest box covering every input. Throws Error("empty box set") on empty input.
Box2D box_union_bounds(std::span<const Box2D> boxes);

Box2D scaled(const Box2D& b, double factor);
Box2D dilated(const Box2D& b, double margin);

}  // namespace heatseek
