#include <doctest.h>

#include <random>
#include <vector>

#include "heatseek/error.hpp"
#include "heatseek/registration.hpp"
#include "oracles.hpp"

using namespace heatseek;

namespace {

std::vector<Correspondence> make_pairs(const std::vector<Point2D>& thermal, const AffineMap& truth) {
  std::vector<Correspondence> out;
  for (const auto& p : thermal) out.push_back({p, truth.apply(p)});
  return out;
}


}  // namespace

TEST_CASE("fit_affine recovers the identity") {
  const std::vector<Correspondence> pairs{{{0, 0}, {0, 0}}, {{79, 0}, {79, 0}}, {{0, 59}, {0, 59}}, {{79, 59}, {79, 59}}};
  const AffineMap m = fit_affine(pairs);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(m.coeffs()[i] - AffineMap().coeffs()[i]) < 1e-12);
  CHECK(m.residual_rms() < 1e-9);
}

TEST_CASE("fit_affine recovers a scale-24 map and agrees with the normal equations") {
  const std::vector<Point2D> pts{{0, 0}, {79, 0}, {0, 59}, {79, 59}};
  const auto pairs = make_pairs(pts, AffineMap::scale(24, 24));
  const AffineMap m = fit_affine(pairs);
  const std::array<double, 6> expected{24, 0, 0, 0, 24, 0};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(m.coeffs()[i] - expected[i]) < 1e-9);
  CHECK(m.residual_rms() < 1e-6);

  std::vector<std::pair<Point2D, double>> xs, ys;
  for (const auto& c : pairs) {
    xs.push_back({c.thermal, c.rgb.x});
    ys.push_back({c.thermal, c.rgb.y});
  }
  const auto rx = oracle::normal_equation_row(xs), ry = oracle::normal_equation_row(ys);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(m.coeffs()[i] - rx[i]) < 1e-8);
    CHECK(std::abs(m.coeffs()[3 + i] - ry[i]) < 1e-8);
  }
}

TEST_CASE("three pairs interpolate exactly") {
  const std::vector<Correspondence> pairs{{{0, 0}, {10, 20}}, {{1, 0}, {12, 20}}, {{0, 1}, {10, 23}}};
  const AffineMap m = fit_affine(pairs);
  const std::array<double, 6> expected{2, 0, 10, 0, 3, 20};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(m.coeffs()[i] - expected[i]) < 1e-12);
  CHECK(m.residual_rms() < 1e-9);
}

TEST_CASE("least squares on noisy data matches the normal equations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> px(0, 80), py(0, 60), noise(-0.5, 0.5);
  const AffineMap truth({15.8, 0.3, 12, -0.2, 16.1, -7});
  std::vector<Correspondence> pairs;
  for (int i = 0; i < 25; ++i) {
    const Point2D p{px(rng), py(rng)};
    const Point2D q = truth.apply(p);
    pairs.push_back({p, {q.x + noise(rng), q.y + noise(rng)}});
  }
  const AffineMap m = fit_affine(pairs);
  std::vector<std::pair<Point2D, double>> xs, ys;
  for (const auto& c : pairs) {
    xs.push_back({c.thermal, c.rgb.x});
    ys.push_back({c.thermal, c.rgb.y});
  }
  const auto rx = oracle::normal_equation_row(xs), ry = oracle::normal_equation_row(ys);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(m.coeffs()[i] - rx[i]) < 1e-7);
    CHECK(std::abs(m.coeffs()[3 + i] - ry[i]) < 1e-7);
  }
  CHECK(m.residual_rms() > 0.05);
  CHECK(m.residual_rms() < 0.5);
}

TEST_CASE("fit_affine errors") {
  const std::vector<Correspondence> two{{{0, 0}, {0, 0}}, {{1, 1}, {1, 1}}};
  CHECK_THROWS_WITH_AS(fit_affine(two), "insufficient correspondences", Error);
  const std::vector<Correspondence> collinear{{{0, 0}, {0, 0}}, {{1, 1}, {5, 2}}, {{2, 2}, {3, 9}}, {{3, 3}, {1, 1}}};
  CHECK_THROWS_WITH_AS(fit_affine(collinear), "degenerate configuration", Error);
  const std::vector<Correspondence> same{{{4, 4}, {0, 0}}, {{4, 4}, {1, 0}}, {{4, 4}, {0, 1}}};
  CHECK_THROWS_WITH_AS(fit_affine(same), "degenerate configuration", Error);
  // Thermal spread but RGB collapsed onto a line: the fitted map is singular.
  const std::vector<Correspondence> flat{{{0, 0}, {0, 0}}, {{1, 0}, {1, 1}}, {{0, 1}, {2, 2}}};
  CHECK_THROWS_WITH_AS(fit_affine(flat), "degenerate configuration", Error);
  const std::vector<Correspondence> outside{{{0, 0}, {0, 0}}, {{81, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  CHECK_THROWS_AS(fit_affine(outside, GridSize{80, 60}), Error);
  CHECK_NOTHROW(fit_affine(outside));
}

TEST_CASE("apply_map") {
  CHECK(apply_map(AffineMap(), {5, 7}) == Point2D{5, 7});
  CHECK(apply_map(AffineMap::scale(24, 24), {1, 2}) == Point2D{24, 48});
  CHECK(apply_map(AffineMap({2, 0, 10, 0, 3, 20}), {1, 1}) == Point2D{12, 23});
}

TEST_CASE("affine map construction rejects singular and non-finite coefficients") {
  CHECK_THROWS_WITH_AS(AffineMap({1, 2, 0, 2, 4, 0}), "degenerate configuration", Error);
  CHECK_THROWS_AS(AffineMap({1, 0, NAN, 0, 1, 0}), Error);
}

TEST_CASE("inverse round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-20, 20), pt(-100, 100);
  int tested = 0;
  while (tested < 200) {
    const std::array<double, 6> k{coef(rng), coef(rng), coef(rng), coef(rng), coef(rng), coef(rng)};
    if (std::abs(k[0] * k[4] - k[1] * k[3]) < 1.0) continue;
    const AffineMap m(k);
    const AffineMap inv = m.inverse();
    for (int i = 0; i < 5; ++i) {
      const Point2D p{pt(rng), pt(rng)};
      const Point2D q = m.apply(inv.apply(p));
      CHECK(std::abs(q.x - p.x) < 1e-9);
      CHECK(std::abs(q.y - p.y) < 1e-9);
    }
    ++tested;
  }
}

TEST_CASE("warp with identity map reproduces the grid") {
  std::vector<double> temps;
  for (int i = 0; i < 80 * 60; ++i) temps.push_back(20.0 + (i % 17) * 0.37);
  const ThermalGrid t(80, 60, temps);
  const ThermalGrid w = warp_thermal(t, AffineMap(), 80, 60);
  for (std::size_t i = 0; i < temps.size(); ++i) CHECK(w.temps()[i] == doctest::Approx(temps[i]).epsilon(1e-12));
}

TEST_CASE("warp of a constant grid stays constant") {
  const ThermalGrid t(80, 60, 20.0);
  const ThermalGrid w = warp_thermal(t, AffineMap({13.1, 0.4, 5, -0.3, 12.7, 9}), 200, 150);
  for (double v : w.temps()) CHECK(v == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("hot pixel lands near its mapped location") {
  std::vector<double> temps(80 * 60, 20.0);
  temps[10 * 80 + 10] = 40.0;
  const ThermalGrid t(80, 60, temps);
  const AffineMap m = AffineMap::scale(24, 24);
  const int W = 480, H = 480;
  const ThermalGrid w = warp_thermal(t, m, W, H);

  // Brute force: tent-weighted sum of thermal samples at each output pixel center
  // (edge clamping differs, so values are compared away from the top/left border).
  double best = -1;
  int bx = -1, by = -1;
  for (int v = 0; v < H; ++v)
    for (int u = 0; u < W; ++u) {
      const double x = (u + 0.5) / 24.0 - 0.5, y = (v + 0.5) / 24.0 - 0.5;
      double s = 0;
      const int i0 = std::max(0, static_cast<int>(std::floor(x)) - 1), j0 = std::max(0, static_cast<int>(std::floor(y)) - 1);
      for (int j = j0; j < std::min(60, j0 + 4); ++j)
        for (int i = i0; i < std::min(80, i0 + 4); ++i) {
          const double wx = std::max(0.0, 1 - std::abs(x - i)), wy = std::max(0.0, 1 - std::abs(y - j));
          if (wx > 0 && wy > 0) s += wx * wy * temps[j * 80 + i];
        }
      if (x >= 0 && y >= 0) CHECK(std::abs(s - w.at(u, v)) < 1e-9);
      if (s > best) best = s, bx = u, by = v;
    }
  int ax = 0, ay = 0;
  double peak = -1;
  for (int v = 0; v < H; ++v)
    for (int u = 0; u < W; ++u)
      if (w.at(u, v) > peak) peak = w.at(u, v), ax = u, ay = v;
  CHECK(std::abs(w.at(bx, by) - peak) < 1e-9);
  CHECK(std::abs(best - peak) < 1e-9);
  CHECK(std::hypot(ax - 240.0, ay - 240.0) <= 24.0);
}

TEST_CASE("warp stays within the input range and fills out-of-view pixels") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> temp(10, 60);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> temps(20 * 15);
    for (double& v : temps) v = temp(rng);
    const ThermalGrid t(20, 15, temps);
    // Shifted map leaves part of the output outside the thermal footprint.
    const ThermalGrid w = warp_thermal(t, AffineMap({4, 0.5, 30, -0.2, 4, 20}), 120, 90);
    for (double v : w.temps()) {
      CHECK(v >= t.min());
      CHECK(v <= t.max());
    }
    CHECK(w.at(0, 0) == t.median());
  }
  const ThermalGrid t(4, 4, 30.0);
  const ThermalGrid w = warp_thermal(t, AffineMap({1, 0, 100, 0, 1, 100}), 8, 8, 12.5);
  CHECK(w.at(3, 3) == 12.5);
}

TEST_CASE("fit on consistent data reproduces the generator on its inputs") {
  const AffineMap truth({16.2, -0.4, 3.5, 0.25, 15.9, -2.0});
  std::vector<Point2D> pts{{1, 2}, {70, 5}, {40, 55}, {13, 31}, {77, 58}, {0.5, 59.5}};
  const auto pairs = make_pairs(pts, truth);
  const AffineMap m = fit_affine(pairs);
  for (const auto& c : pairs) {
    const Point2D q = m.apply(c.thermal);
    CHECK(std::abs(q.x - c.rgb.x) < 1e-6);
    CHECK(std::abs(q.y - c.rgb.y) < 1e-6);
  }
}

TEST_CASE("map and correspondence files") {
  const AffineMap m({2, 0, 10, 0, 3, 20}, 0.125);
  const AffineMap back = parse_map(map_to_json(m));
  CHECK(back == m);
  CHECK_THROWS_AS(parse_map(R"({"coeffs":[1,2,3]})"), Error);
  CHECK_THROWS_AS(parse_map(R"({"coeffs":[1,2,0,2,4,0]})"), Error);
  const auto pairs = parse_correspondences(R"([{"thermal":[1,2],"rgb":[3,4]}])");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].thermal == Point2D{1, 2});
  CHECK(pairs[0].rgb == Point2D{3, 4});
  CHECK_THROWS_WITH_AS(parse_correspondences(R"([{"thermal":[1,2]}])"), doctest::Contains("rgb"), Error);
}
