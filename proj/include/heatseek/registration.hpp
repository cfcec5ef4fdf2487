#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>
#include <optional>
#include <span>

#include "heatseek/geometry.hpp"
#include "heatseek/image.hpp"

namespace heatseek {

struct Correspondence {
  Point2D thermal;  // thermal-grid coordinates
  Point2D rgb;      // RGB image coordinates
};

// Affine transform (x, y) -> (a x + b y + c, d x + e y + f) from thermal-grid
// coordinates into RGB coordinates. Both frames place pixel (i, j) over
// [i, i + 1) x [j, j + 1). Construction rejects non-finite or singular
// coefficients.
class AffineMap {
 public:
  static constexpr double kSingularTolerance = 1e-12;

  AffineMap();  // identity
  explicit AffineMap(const std::array<double, 6>& coeffs, double residual_rms = 0.0);

  static AffineMap scale(double sx, double sy);

  const std::array<double, 6>& coeffs() const { return coeffs_; }
  double residual_rms() const { return residual_rms_; }
  double determinant() const { return coeffs_[0] * coeffs_[4] - coeffs_[1] * coeffs_[3]; }

  Point2D apply(const Point2D& p) const;
  AffineMap inverse() const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;

 private:
  std::array<double, 6> coeffs_;
  double residual_rms_;
};

struct GridSize {
  int width = 0;
  int height = 0;
};

/// Least-squares affine fit minimizing squared RGB-space residuals.
///
/// Needs at least three non-collinear correspondences; exactly three give an
/// exact interpolant. When `thermal_bounds` is set, thermal points outside
/// [0, width] x [0, height] are rejected.
AffineMap fit_affine(std::span<const Correspondence> pairs,
                     std::optional<GridSize> thermal_bounds = std::nullopt);

inline Point2D apply_map(const AffineMap& m, const Point2D& p) { return m.apply(p); }

/// Resamples a thermal grid into an out_width x out_height grid in RGB
/// coordinates. Each output pixel center is pulled back through the inverse
/// map and sampled bilinearly; pull-backs that leave the thermal grid take
/// `ambient` (default: the grid median).
ThermalGrid warp_thermal(const ThermalGrid& t, const AffineMap& m, int out_width, int out_height,
                         std::optional<double> ambient = std::nullopt);

// Bilinear sample at continuous thermal coordinates (pixel centers at i + 0.5),
// edge samples clamped. Caller guarantees the point lies inside [0, w] x [0, h].
double sample_bilinear(const ThermalGrid& t, double x, double y);

// Calibration file: [{"thermal":[x,y],"rgb":[x,y]}, ...]
std::vector<Correspondence> parse_correspondences(const std::string& text, const std::string& source = "pairs");
std::vector<Correspondence> load_correspondences_file(const std::filesystem::path& path);

// Map file: {"coeffs":[a,b,c,d,e,f],"residual_rms":r}
std::string map_to_json(const AffineMap& m);
AffineMap parse_map(const std::string& text, const std::string& source = "map");
AffineMap load_map_file(const std::filesystem::path& path);

}  // namespace heatseek
