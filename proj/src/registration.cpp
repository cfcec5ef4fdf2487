#include "heatseek/registration.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "heatseek/error.hpp"
#include "heatseek/io.hpp"
#include "json_util.hpp"

namespace heatseek {

AffineMap::AffineMap() : AffineMap({1, 0, 0, 0, 1, 0}) {}

AffineMap::AffineMap(const std::array<double, 6>& coeffs, double residual_rms)
    : coeffs_(coeffs), residual_rms_(residual_rms) {
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw Error("affine coefficients must be finite");
  if (!(std::abs(determinant()) > kSingularTolerance)) throw Error("degenerate configuration");
}

AffineMap AffineMap::scale(double sx, double sy) { return AffineMap({sx, 0, 0, 0, sy, 0}); }

Point2D AffineMap::apply(const Point2D& p) const {
  const auto& k = coeffs_;
  return {k[0] * p.x + k[1] * p.y + k[2], k[3] * p.x + k[4] * p.y + k[5]};
}

AffineMap AffineMap::inverse() const {
  const auto& k = coeffs_;
  const double det = determinant();
  const double ia = k[4] / det, ib = -k[1] / det;
  const double id = -k[3] / det, ie = k[0] / det;
  return AffineMap({ia, ib, -(ia * k[2] + ib * k[5]), id, ie, -(id * k[2] + ie * k[5])});
}

AffineMap fit_affine(std::span<const Correspondence> pairs, std::optional<GridSize> thermal_bounds) {
  if (pairs.size() < 3) throw Error("insufficient correspondences");
  const auto n = static_cast<Eigen::Index>(pairs.size());

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& c : pairs) {
    if (!is_finite(c.thermal) || !is_finite(c.rgb)) throw Error("correspondence coordinates must be finite");
    if (thermal_bounds && (c.thermal.x < 0 || c.thermal.y < 0 || c.thermal.x > thermal_bounds->width ||
                           c.thermal.y > thermal_bounds->height))
      throw Error("correspondence outside thermal grid bounds");
    mean += Eigen::Vector2d(c.thermal.x, c.thermal.y);
  }
  mean /= static_cast<double>(n);

  // Centered design matrix [x' y' 1]; rank < 3 means the thermal points are collinear.
  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd target(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = pairs[static_cast<std::size_t>(i)];
    design.row(i) << c.thermal.x - mean.x(), c.thermal.y - mean.y(), 1.0;
    target.row(i) << c.rgb.x, c.rgb.y;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design.leftCols(2));
  const auto sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(1) <= 1e-10 * sv(0)) throw Error("degenerate configuration");

  const Eigen::MatrixXd sol = design.colPivHouseholderQr().solve(target);  // 3 x 2
  const double a = sol(0, 0), b = sol(1, 0), d = sol(0, 1), e = sol(1, 1);
  const double c = sol(2, 0) - a * mean.x() - b * mean.y();
  const double f = sol(2, 1) - d * mean.x() - e * mean.y();

  const double rms = std::sqrt((design * sol - target).squaredNorm() / static_cast<double>(n));
  return AffineMap({a, b, c, d, e, f}, rms);
}

double sample_bilinear(const ThermalGrid& t, double x, double y) {
  const double fx = std::clamp(x - 0.5, 0.0, static_cast<double>(t.width() - 1));
  const double fy = std::clamp(y - 0.5, 0.0, static_cast<double>(t.height() - 1));
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, t.width() - 1), y1 = std::min(y0 + 1, t.height() - 1);
  const double wx = fx - x0, wy = fy - y0;
  const double top = (1 - wx) * t.at(x0, y0) + wx * t.at(x1, y0);
  const double bot = (1 - wx) * t.at(x0, y1) + wx * t.at(x1, y1);
  return (1 - wy) * top + wy * bot;
}

ThermalGrid warp_thermal(const ThermalGrid& t, const AffineMap& m, int out_width, int out_height,
                         std::optional<double> ambient) {
  if (out_width < 1 || out_height < 1) throw Error("warp output dimensions must be at least 1x1");
  const AffineMap inv = m.inverse();
  const double fill = ambient.value_or(t.median());
  const double w = t.width(), h = t.height();
  const auto& k = inv.coeffs();

  std::vector<double> out(static_cast<std::size_t>(out_width) * out_height);
  for (int v = 0; v < out_height; ++v) {
    const double yc = v + 0.5;
    for (int u = 0; u < out_width; ++u) {
      const double xc = u + 0.5;
      const double x = k[0] * xc + k[1] * yc + k[2];
      const double y = k[3] * xc + k[4] * yc + k[5];
      const bool inside = x >= 0.0 && x < w && y >= 0.0 && y < h;
      out[static_cast<std::size_t>(v) * out_width + u] = inside ? sample_bilinear(t, x, y) : fill;
    }
  }
  return ThermalGrid(out_width, out_height, std::move(out), t.meta());
}

std::vector<Correspondence> parse_correspondences(const std::string& text, const std::string& source) {
  const detail::Json root = detail::parse_json(text, source);
  detail::require_array(root, "root");
  std::vector<Correspondence> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    out.push_back({detail::point_from_json(detail::require(root[i], "thermal", at), at + ".thermal"),
                   detail::point_from_json(detail::require(root[i], "rgb", at), at + ".rgb")});
  }
  return out;
}

std::vector<Correspondence> load_correspondences_file(const std::filesystem::path& path) {
  return parse_correspondences(io::read_text(path), path.string());
}

std::string map_to_json(const AffineMap& m) {
  detail::OrderedJson j{{"coeffs", m.coeffs()}, {"residual_rms", m.residual_rms()}};
  return j.dump(2) + "\n";
}

AffineMap parse_map(const std::string& text, const std::string& source) {
  const detail::Json root = detail::parse_json(text, source);
  const detail::Json& coeffs = detail::require_array(detail::require(root, "coeffs", "root"), "coeffs");
  if (coeffs.size() != 6) detail::schema_violation("coeffs", "expected 6 values");
  std::array<double, 6> k{};
  for (std::size_t i = 0; i < 6; ++i) k[i] = detail::require_number(coeffs[i], "coeffs[" + std::to_string(i) + "]");
  double rms = 0.0;
  if (root.contains("residual_rms")) rms = detail::require_number(root["residual_rms"], "residual_rms");
  return AffineMap(k, rms);
}

AffineMap load_map_file(const std::filesystem::path& path) { return parse_map(io::read_text(path), path.string()); }

}  // namespace heatseek
