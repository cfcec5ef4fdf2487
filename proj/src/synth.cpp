#include "heatseek/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "heatseek/error.hpp"
#include "heatseek/io.hpp"
#include "json_util.hpp"

namespace heatseek {

using detail::Json;
using detail::OrderedJson;

namespace fs = std::filesystem;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::int64_t SplitMix64::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  const auto k = static_cast<std::int64_t>(std::floor(uniform() * span));
  return lo + std::min(k, hi - lo);
}

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

const std::vector<std::string>& default_object_names() {
  static const std::vector<std::string> names = {
      "Toilet Paper Roll", "Book",       "PET Bottle",  "Pouch (Snowman)", "Toy Car",    "Toy Mammoth",
      "Pill Bottle",       "Toy Frog",   "Wine Box",    "Lamp",            "Toy Box",    "Clock",
      "Toy Horse",         "Gum Bottle", "Toy Egg",     "Glasses",         "Banana",     "Sponge",
      "Sunscreen",         "Toy Buzzer", "Medicine Box", "Paper Roll"};
  return names;
}

int dropped_count(const SceneSpec& spec) {
  return static_cast<int>(std::lround(spec.detector_dropout * spec.n_objects));
}

void validate(const SceneSpec& s) {
  auto fail = [](const std::string& what) { throw Error("invalid scene spec: " + what); };
  if (s.rgb_width < 1 || s.rgb_height < 1) fail("rgb_dims must be at least 1x1");
  if (s.thermal_width < 1 || s.thermal_height < 1) fail("thermal_dims must be at least 1x1");
  if (s.n_objects < 0) fail("n_objects must be non-negative");
  if (s.n_hiders < 0 || s.n_hiders > s.n_objects) fail("n_hiders must lie in [0, n_objects]");
  if (s.object_size_min < 1 || s.object_size_max < s.object_size_min) fail("object_size_range must satisfy 1 <= min <= max");
  if (s.object_size_max > std::min(s.rgb_width, s.rgb_height)) fail("object_size_range exceeds the rgb image");
  if (!std::isfinite(s.hot_spot_delta) || s.hot_spot_delta < 0) fail("hot_spot.delta_temp must be non-negative");
  if (!(s.hot_spot_sigma > 0) || !std::isfinite(s.hot_spot_sigma)) fail("hot_spot.sigma must be positive");
  if (!(s.hot_spot_min_separation >= 0) || !std::isfinite(s.hot_spot_min_separation))
    fail("hot_spot.min_separation must be non-negative");
  if (!std::isfinite(s.ambient)) fail("ambient must be finite");
  if (!(s.thermal_noise_sigma >= 0) || !std::isfinite(s.thermal_noise_sigma)) fail("thermal_noise_sigma must be non-negative");
  if (s.distractor_heat && (s.distractor_heat->count < 0 || !std::isfinite(s.distractor_heat->delta_temp)))
    fail("distractor_heat must have a non-negative count and finite delta_temp");
  if (!(s.detector_dropout >= 0 && s.detector_dropout <= 1)) fail("detector_dropout must lie in [0,1]");
  if (s.dropped_hiders) {
    const int k = *s.dropped_hiders, n_drop = dropped_count(s);
    if (k < 0 || k > s.n_hiders || k > n_drop || n_drop - k > s.n_objects - s.n_hiders)
      fail("dropped_hiders is incompatible with n_hiders and detector_dropout");
  }
}

namespace {

struct PlacedObject {
  Box2D box;
  float color[3];
};

bool separated(const Box2D& a, const Box2D& b) {
  return a.right() + kObjectGap <= b.x || b.right() + kObjectGap <= a.x || a.bottom() + kObjectGap <= b.y ||
         b.bottom() + kObjectGap <= a.y;
}

// Uniform point in the central half of the box.
Point2D interior_point(SplitMix64& rng, const Box2D& b) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  return {b.x + 0.25 * b.w + u * 0.5 * b.w, b.y + 0.25 * b.h + v * 0.5 * b.h};
}

template <typename T>
void shuffle(SplitMix64& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(v[i - 1], v[j]);
  }
}

struct HeatSource {
  Point2D thermal;  // thermal-grid coordinates
  double delta;
};

constexpr int kHotSpotAttempts = 32;

}  // namespace

SynthScene generate_scene(const SceneSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  const AffineMap map = AffineMap::scale(static_cast<double>(spec.rgb_width) / spec.thermal_width,
                                         static_cast<double>(spec.rgb_height) / spec.thermal_height);
  const AffineMap to_thermal = map.inverse();

  // 1. Objects, in index order.
  std::vector<PlacedObject> objects;
  for (int i = 0; i < spec.n_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const auto w = rng.uniform_int(spec.object_size_min, spec.object_size_max);
      const auto h = rng.uniform_int(spec.object_size_min, spec.object_size_max);
      const auto x = rng.uniform_int(0, spec.rgb_width - w);
      const auto y = rng.uniform_int(0, spec.rgb_height - h);
      const Box2D box{static_cast<double>(x), static_cast<double>(y), static_cast<double>(w), static_cast<double>(h)};
      if (std::all_of(objects.begin(), objects.end(), [&](const PlacedObject& o) { return separated(o.box, box); })) {
        PlacedObject obj{box, {}};
        for (float& c : obj.color) c = static_cast<float>(0.6 * rng.uniform());
        objects.push_back(obj);
        placed = true;
      }
    }
    if (!placed) throw Error("scene too crowded");
  }

  // 2. Hiders: walk a shuffled object order, accepting objects that admit a
  //    hot spot far enough from the ones already accepted.
  std::vector<int> order(spec.n_objects);
  std::iota(order.begin(), order.end(), 0);
  shuffle(rng, order);
  std::vector<bool> is_hider(spec.n_objects, false);
  std::vector<Point2D> spot_rgb(spec.n_objects);
  std::vector<HeatSource> sources;
  int accepted = 0;
  for (std::size_t k = 0; k < order.size() && accepted < spec.n_hiders; ++k) {
    const int idx = order[k];
    for (int attempt = 0; attempt < kHotSpotAttempts; ++attempt) {
      const Point2D p = interior_point(rng, objects[idx].box);
      const Point2D q = to_thermal.apply(p);
      const bool far = std::all_of(sources.begin(), sources.end(), [&](const HeatSource& s) {
        return std::hypot(s.thermal.x - q.x, s.thermal.y - q.y) >= spec.hot_spot_min_separation;
      });
      if (far) {
        is_hider[idx] = true;
        spot_rgb[idx] = p;
        sources.push_back({q, spec.hot_spot_delta});
        ++accepted;
        break;
      }
    }
  }
  if (accepted < spec.n_hiders) throw Error("scene too crowded");

  // 3. Distractor heat on non-hider objects.
  std::vector<int> others;
  for (int i = 0; i < spec.n_objects; ++i)
    if (!is_hider[i]) others.push_back(i);
  if (spec.distractor_heat && !others.empty()) {
    for (int k = 0; k < spec.distractor_heat->count; ++k) {
      const auto pick = others[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(others.size()) - 1))];
      sources.push_back({to_thermal.apply(interior_point(rng, objects[pick].box)), spec.distractor_heat->delta_temp});
    }
  }

  // 4. Detector dropout.
  const int n_drop = dropped_count(spec);
  std::vector<int> dropped;
  if (spec.dropped_hiders) {
    std::vector<int> hiders;
    for (int i = 0; i < spec.n_objects; ++i)
      if (is_hider[i]) hiders.push_back(i);
    shuffle(rng, hiders);
    shuffle(rng, others);
    dropped.assign(hiders.begin(), hiders.begin() + *spec.dropped_hiders);
    dropped.insert(dropped.end(), others.begin(), others.begin() + (n_drop - *spec.dropped_hiders));
  } else {
    std::vector<int> all(spec.n_objects);
    std::iota(all.begin(), all.end(), 0);
    shuffle(rng, all);
    dropped.assign(all.begin(), all.begin() + n_drop);
  }
  std::sort(dropped.begin(), dropped.end());

  // 5. Thermal rendering and sensor noise, row-major.
  const double two_sigma_sq = 2.0 * spec.hot_spot_sigma * spec.hot_spot_sigma;
  std::vector<double> temps(static_cast<std::size_t>(spec.thermal_width) * spec.thermal_height, spec.ambient);
  for (int y = 0; y < spec.thermal_height; ++y)
    for (int x = 0; x < spec.thermal_width; ++x) {
      double& t = temps[static_cast<std::size_t>(y) * spec.thermal_width + x];
      for (const auto& s : sources) {
        const double dx = x + 0.5 - s.thermal.x, dy = y + 0.5 - s.thermal.y;
        t += s.delta * std::exp(-(dx * dx + dy * dy) / two_sigma_sq);
      }
    }
  if (spec.thermal_noise_sigma > 0.0)
    for (double& t : temps) t += spec.thermal_noise_sigma * rng.normal();

  ImageGrid rgb(spec.rgb_width, spec.rgb_height, 3, kBackgroundLuma);
  for (const auto& o : objects)
    for (int y = static_cast<int>(o.box.y); y < static_cast<int>(o.box.bottom()); ++y)
      for (int x = static_cast<int>(o.box.x); x < static_cast<int>(o.box.right()); ++x)
        for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = o.color[c];

  std::vector<GroundTruthObject> truth;
  const auto& names = default_object_names();
  for (int i = 0; i < spec.n_objects; ++i) {
    const std::string name = i < static_cast<int>(names.size()) ? names[i] : "Object " + std::to_string(i + 1);
    truth.push_back({name, objects[i].box, is_hider[i]});
  }

  std::vector<Detection> dets;
  std::vector<Point2D> hot_spots;
  for (int i = 0; i < spec.n_objects; ++i) {
    if (!std::binary_search(dropped.begin(), dropped.end(), i)) dets.push_back({objects[i].box, "object", 1.0});
    if (is_hider[i]) hot_spots.push_back(spot_rgb[i]);
  }

  return SynthScene{spec,
                    std::move(rgb),
                    ThermalGrid(spec.thermal_width, spec.thermal_height, std::move(temps)),
                    std::move(truth),
                    std::move(dets),
                    map,
                    std::move(hot_spots),
                    std::move(dropped)};
}

bool hot_spot_check(const SynthScene& scene) {
  const auto& spec = scene.spec;
  const ThermalGrid warped = warp_thermal(scene.thermal, scene.map, scene.rgb.width(), scene.rgb.height());
  const double bar = spec.ambient + spec.hot_spot_delta / 2.0;
  for (const auto& t : scene.truth) {
    if (!t.hides_camera) continue;
    double peak = -INFINITY;
    for (int y = std::max(0, static_cast<int>(t.box.y)); y < std::min(warped.height(), static_cast<int>(t.box.bottom())); ++y)
      for (int x = std::max(0, static_cast<int>(t.box.x)); x < std::min(warped.width(), static_cast<int>(t.box.right())); ++x)
        peak = std::max(peak, warped.at(x, y));
    if (!(peak > bar)) return false;
  }
  return true;
}

std::string scene_spec_to_json(const SceneSpec& s) {
  OrderedJson j;
  j["seed"] = s.seed;
  j["rgb_dims"] = {s.rgb_width, s.rgb_height};
  j["thermal_dims"] = {s.thermal_width, s.thermal_height};
  j["n_objects"] = s.n_objects;
  j["n_hiders"] = s.n_hiders;
  j["object_size_range"] = {s.object_size_min, s.object_size_max};
  j["hot_spot"] = {{"delta_temp", s.hot_spot_delta}, {"sigma", s.hot_spot_sigma}, {"min_separation", s.hot_spot_min_separation}};
  j["ambient"] = s.ambient;
  j["thermal_noise_sigma"] = s.thermal_noise_sigma;
  j["distractor_heat"] = s.distractor_heat
                             ? OrderedJson{{"count", s.distractor_heat->count}, {"delta_temp", s.distractor_heat->delta_temp}}
                             : OrderedJson(nullptr);
  j["detector_dropout"] = s.detector_dropout;
  j["dropped_hiders"] = s.dropped_hiders ? OrderedJson(*s.dropped_hiders) : OrderedJson(nullptr);
  return j.dump(2) + "\n";
}

namespace {

int require_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) detail::schema_violation(where, "expected an integer");
  return v.get<int>();
}

std::pair<int, int> require_pair(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) detail::schema_violation(where, "expected a pair");
  return {require_int(v[0], where + "[0]"), require_int(v[1], where + "[1]")};
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) detail::schema_violation(where, "expected an object");
  for (const auto& [k, _] : obj.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; }))
      detail::schema_violation(where + "." + k, "unknown key");
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& text, const std::string& source) {
  const Json j = detail::parse_json(text, source);
  reject_unknown(j,
                 {"seed", "rgb_dims", "thermal_dims", "n_objects", "n_hiders", "object_size_range", "hot_spot", "ambient",
                  "thermal_noise_sigma", "distractor_heat", "detector_dropout", "dropped_hiders"},
                 "spec");
  SceneSpec s;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      detail::schema_violation("spec.seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("rgb_dims")) std::tie(s.rgb_width, s.rgb_height) = require_pair(j["rgb_dims"], "spec.rgb_dims");
  if (j.contains("thermal_dims"))
    std::tie(s.thermal_width, s.thermal_height) = require_pair(j["thermal_dims"], "spec.thermal_dims");
  if (j.contains("n_objects")) s.n_objects = require_int(j["n_objects"], "spec.n_objects");
  if (j.contains("n_hiders")) s.n_hiders = require_int(j["n_hiders"], "spec.n_hiders");
  if (j.contains("object_size_range"))
    std::tie(s.object_size_min, s.object_size_max) = require_pair(j["object_size_range"], "spec.object_size_range");
  if (j.contains("hot_spot")) {
    const Json& h = j["hot_spot"];
    reject_unknown(h, {"delta_temp", "sigma", "min_separation"}, "spec.hot_spot");
    if (h.contains("delta_temp")) s.hot_spot_delta = detail::require_number(h["delta_temp"], "spec.hot_spot.delta_temp");
    if (h.contains("sigma")) s.hot_spot_sigma = detail::require_number(h["sigma"], "spec.hot_spot.sigma");
    if (h.contains("min_separation"))
      s.hot_spot_min_separation = detail::require_number(h["min_separation"], "spec.hot_spot.min_separation");
  }
  if (j.contains("ambient")) s.ambient = detail::require_number(j["ambient"], "spec.ambient");
  if (j.contains("thermal_noise_sigma"))
    s.thermal_noise_sigma = detail::require_number(j["thermal_noise_sigma"], "spec.thermal_noise_sigma");
  if (j.contains("distractor_heat") && !j["distractor_heat"].is_null()) {
    const Json& d = j["distractor_heat"];
    reject_unknown(d, {"count", "delta_temp"}, "spec.distractor_heat");
    DistractorHeat dh;
    if (d.contains("count")) dh.count = require_int(d["count"], "spec.distractor_heat.count");
    if (d.contains("delta_temp")) dh.delta_temp = detail::require_number(d["delta_temp"], "spec.distractor_heat.delta_temp");
    s.distractor_heat = dh;
  }
  if (j.contains("detector_dropout"))
    s.detector_dropout = detail::require_number(j["detector_dropout"], "spec.detector_dropout");
  if (j.contains("dropped_hiders") && !j["dropped_hiders"].is_null())
    s.dropped_hiders = require_int(j["dropped_hiders"], "spec.dropped_hiders");
  return s;
}

void write_scene_bundle(const SynthScene& scene, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  io::save_png(scene.rgb, dir / SceneBundle::kRgb);
  io::save_thermal_csv(scene.thermal, dir / SceneBundle::kThermal);
  io::write_text(dir / SceneBundle::kTruth, truth_to_json(scene.truth));
  io::write_text(dir / SceneBundle::kDetections, detections_to_json(SceneBundle::kImageId, scene.oracle_detections));
  io::write_text(dir / SceneBundle::kMap, map_to_json(scene.map));
  io::write_text(dir / SceneBundle::kSpec, scene_spec_to_json(scene.spec));
}

}  // namespace heatseek
