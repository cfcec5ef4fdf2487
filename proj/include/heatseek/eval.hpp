#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "heatseek/fusion.hpp"
#include "heatseek/geometry.hpp"
#include "heatseek/image.hpp"

namespace heatseek {

inline constexpr double kDefaultMatchTau = 0.05;

struct GroundTruthObject {
  std::string name;
  Box2D box;
  bool hides_camera = false;

  friend bool operator==(const GroundTruthObject&, const GroundTruthObject&) = default;
};

struct TargetScore {
  std::string name;
  double best_iou = 0.0;
  bool matched = false;
};

struct EvalReport {
  std::vector<TargetScore> per_target;
  double accuracy = 0.0;
  double mean_iou = 0.0;
  double min_iou = 0.0;
  double max_iou = 0.0;
  std::size_t n_targets = 0;
  std::size_t n_suspects = 0;

  std::size_t matched_count() const;
};

// Throws Error on non-positive boxes or duplicate names.
void validate_truth(std::span<const GroundTruthObject> truth);

/// Scores suspects against the camera-hiding truth objects. Each target keeps
/// its best IoU over all suspects (0 without suspects) and counts as matched
/// when that exceeds `match_tau`. Suspects are not assigned exclusively.
EvalReport evaluate(std::span<const SuspectRegion> suspects, std::span<const GroundTruthObject> truth,
                    double match_tau = kDefaultMatchTau);

// Copy of the image (promoted to RGB) with target boxes stroked pure blue and
// suspect boxes pure green, 2-pixel borders inside each clamped box.
ImageGrid render_overlay(const ImageGrid& rgb, std::span<const SuspectRegion> suspects,
                         std::span<const GroundTruthObject> truth);

std::string truth_to_json(std::span<const GroundTruthObject> truth);
std::vector<GroundTruthObject> parse_truth(const std::string& text, const std::string& source = "truth");
std::vector<GroundTruthObject> load_truth_file(const std::filesystem::path& path);

std::string report_to_json(const EvalReport& report);
// One row per target (name, best IoU to 3 decimals, matched) and a summary line.
std::string report_table(const EvalReport& report);

}  // namespace heatseek
