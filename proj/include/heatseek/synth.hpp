#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heatseek/detection.hpp"
#include "heatseek/eval.hpp"
#include "heatseek/image.hpp"
#include "heatseek/registration.hpp"

namespace heatseek {

// SplitMix64. Every random draw of the scene generator comes from one of
// these, so scenes are reproducible across platforms (see docs/synth_generator.md).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller; consumes two uniforms.
  double normal();

 private:
  std::uint64_t state_;
};

struct DistractorHeat {
  int count = 0;
  double delta_temp = 8.0;

  friend bool operator==(const DistractorHeat&, const DistractorHeat&) = default;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int rgb_width = 1280;
  int rgb_height = 960;
  int thermal_width = 80;
  int thermal_height = 60;
  int n_objects = 22;
  int n_hiders = 5;
  int object_size_min = 40;
  int object_size_max = 160;
  double hot_spot_delta = 12.0;  // degrees Celsius above ambient
  double hot_spot_sigma = 1.2;   // thermal pixels
  // Minimum distance between hider hot spots, thermal pixels.
  double hot_spot_min_separation = 7.2;
  double ambient = 21.0;
  double thermal_noise_sigma = 0.3;
  std::optional<DistractorHeat> distractor_heat;
  double detector_dropout = 0.0;
  // When set, exactly this many of the dropped objects are hiders.
  std::optional<int> dropped_hiders;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

inline constexpr int kObjectGap = 4;
inline constexpr float kBackgroundLuma = 0.9f;
inline constexpr int kPlacementAttempts = 10000;

// Throws Error naming the first broken constraint.
void validate(const SceneSpec& spec);
// round(detector_dropout * n_objects)
int dropped_count(const SceneSpec& spec);

struct SynthScene {
  SceneSpec spec;
  ImageGrid rgb;
  ThermalGrid thermal;
  std::vector<GroundTruthObject> truth;
  std::vector<Detection> oracle_detections;
  AffineMap map;
  std::vector<Point2D> hot_spots;  // hider hot spot centers, RGB coordinates, truth order
  std::vector<int> dropped;        // truth indices missing from oracle_detections, ascending

  friend bool operator==(const SynthScene&, const SynthScene&) = default;
};

/// Builds a paired RGB/thermal scene. A deterministic function of the spec;
/// throws Error("scene too crowded") when object placement or hot spot
/// separation cannot be satisfied.
SynthScene generate_scene(const SceneSpec& spec);

/// True iff every hider's box, in the warped thermal grid, peaks above
/// ambient + delta / 2.
bool hot_spot_check(const SynthScene& scene);

// The generator's default object names.
const std::vector<std::string>& default_object_names();

std::string scene_spec_to_json(const SceneSpec& spec);
// Missing keys take defaults; unknown keys are rejected.
SceneSpec parse_scene_spec(const std::string& text, const std::string& source = "spec");

struct SceneBundle {
  static constexpr const char* kRgb = "rgb.png";
  static constexpr const char* kThermal = "thermal.csv";
  static constexpr const char* kTruth = "truth.json";
  static constexpr const char* kDetections = "detections.json";
  static constexpr const char* kMap = "map.json";
  static constexpr const char* kSpec = "spec.json";
  static constexpr const char* kImageId = "scene";
};

void write_scene_bundle(const SynthScene& scene, const std::filesystem::path& dir);

}  // namespace heatseek
