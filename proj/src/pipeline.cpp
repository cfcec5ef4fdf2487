#include "heatseek/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "heatseek/error.hpp"
#include "json_util.hpp"

namespace heatseek {

using detail::Json;

void validate(const PipelineConfig& c) {
  if (!std::isfinite(c.threshold.param)) throw Error("invalid threshold parameter");
  if (c.min_contour_area < 1) throw Error("min_contour_area must be at least 1");
  if (!(c.min_confidence >= 0.0 && c.min_confidence <= 1.0)) throw Error("min_confidence must lie in [0,1]");
  if (!(c.association.fallback_margin >= 0.0) || !std::isfinite(c.association.fallback_margin))
    throw Error("fallback_margin must be a non-negative number");
  if (!(c.match_tau >= 0.0 && c.match_tau <= 1.0)) throw Error("match_tau must lie in [0,1]");
}

ThresholdMode threshold_mode_from_string(const std::string& s) {
  if (s == "absolute") return ThresholdMode::kAbsolute;
  if (s == "robust-sigma") return ThresholdMode::kRobustSigma;
  throw Error("unknown threshold mode '" + s + "'");
}

std::set<std::string> parse_label_list(const std::string& comma_separated) {
  std::set<std::string> out;
  std::istringstream in(comma_separated);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.insert(item.substr(b, e - b + 1));
  }
  return out;
}

PipelineConfig parse_pipeline_config(const std::string& text, PipelineConfig c, const std::string& source) {
  const Json j = detail::parse_json(text, source);
  if (!j.is_object()) detail::schema_violation("config", "expected an object");
  auto path = [&](const Json& v, const std::string& key) {
    return std::filesystem::path(detail::require_string(v, "config." + key));
  };
  for (const auto& [key, v] : j.items()) {
    const std::string where = "config." + key;
    if (key == "threshold_mode") c.threshold.mode = threshold_mode_from_string(detail::require_string(v, where));
    else if (key == "threshold_param") c.threshold.param = detail::require_number(v, where);
    else if (key == "min_contour_area") {
      if (!v.is_number_integer()) detail::schema_violation(where, "expected an integer");
      c.min_contour_area = v.get<int>();
    } else if (key == "min_confidence") c.min_confidence = detail::require_number(v, where);
    else if (key == "deny_labels") {
      if (v.is_string()) c.deny_labels = parse_label_list(v.get<std::string>());
      else {
        c.deny_labels.clear();
        for (const auto& l : detail::require_array(v, where)) c.deny_labels.insert(detail::require_string(l, where));
      }
    } else if (key == "fallback") c.association.allow_fallback = detail::require_bool(v, where);
    else if (key == "fallback_margin") c.association.fallback_margin = detail::require_number(v, where);
    else if (key == "match_tau") c.match_tau = detail::require_number(v, where);
    else if (key == "rgb") c.rgb = path(v, key);
    else if (key == "thermal") c.thermal = path(v, key);
    else if (key == "map") c.map = path(v, key);
    else if (key == "detections") c.detections = path(v, key);
    else if (key == "image_id") c.image_id = detail::require_string(v, where);
    else if (key == "truth") c.truth = path(v, key);
    else if (key == "out") c.out = path(v, key);
    else detail::schema_violation(where, "unknown key");
  }
  validate(c);
  return c;
}

PipelineResult run_pipeline(const ImageGrid& rgb, const ThermalGrid& thermal, const AffineMap& map,
                            std::vector<Detection> detections, const PipelineConfig& cfg) {
  validate(cfg);
  for (std::size_t i = 0; i < detections.size(); ++i)
    if (!is_valid(detections[i])) throw Error("invalid detection " + std::to_string(i));

  ThermalGrid warped = warp_thermal(thermal, map, rgb.width(), rgb.height());
  HeatMask mask = threshold_mask(warped, cfg.threshold);
  auto contours = extract_contours(mask, warped, cfg.min_contour_area);
  auto kept = filter_confidence(detections, cfg.min_confidence);
  auto suspects = filter_labels(associate(contours, kept, cfg.association), cfg.deny_labels);
  return {std::move(warped), std::move(mask), std::move(contours), std::move(kept), std::move(suspects)};
}

}  // namespace heatseek
