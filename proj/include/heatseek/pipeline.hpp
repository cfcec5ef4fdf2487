#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heatseek/detection.hpp"
#include "heatseek/eval.hpp"
#include "heatseek/fusion.hpp"
#include "heatseek/image.hpp"
#include "heatseek/registration.hpp"
#include "heatseek/thermal.hpp"

namespace heatseek {

// Every knob of the scan/eval pipeline. Defaults: robust-sigma threshold with
// k = 6, min contour area 4 px, min confidence 0.1, deny labels
// {person, oven}, no fallback (margin 20 px when enabled), match tau 0.05.
struct PipelineConfig {
  ThresholdSpec threshold;
  int min_contour_area = kDefaultMinContourArea;
  double min_confidence = kDefaultMinConfidence;
  std::set<std::string> deny_labels = default_deny_labels();
  AssociationOptions association;
  double match_tau = kDefaultMatchTau;

  std::optional<std::filesystem::path> rgb;
  std::optional<std::filesystem::path> thermal;
  std::optional<std::filesystem::path> map;
  std::optional<std::filesystem::path> detections;
  std::optional<std::string> image_id;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> out;
};

// Throws Error naming the first out-of-range field.
void validate(const PipelineConfig& cfg);

// JSON object with the keys threshold_mode, threshold_param, min_contour_area,
// min_confidence, deny_labels, fallback, fallback_margin, match_tau, rgb,
// thermal, map, detections, image_id, truth, out. Present keys override
// `base`; unknown keys are rejected.
PipelineConfig parse_pipeline_config(const std::string& text, PipelineConfig base = {},
                                     const std::string& source = "config");

ThresholdMode threshold_mode_from_string(const std::string& s);
std::set<std::string> parse_label_list(const std::string& comma_separated);

struct PipelineResult {
  ThermalGrid warped;
  HeatMask mask;
  std::vector<HeatContour> contours;
  std::vector<Detection> detections;  // after the confidence filter
  std::vector<SuspectRegion> suspects;
};

/// warp -> threshold -> contours -> confidence filter -> associate -> label filter.
/// The thermal grid is warped onto the RGB image's pixel grid.
PipelineResult run_pipeline(const ImageGrid& rgb, const ThermalGrid& thermal, const AffineMap& map,
                            std::vector<Detection> detections, const PipelineConfig& cfg);

}  // namespace heatseek
