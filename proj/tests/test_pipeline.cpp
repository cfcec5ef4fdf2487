#include <doctest.h>

#include "heatseek/error.hpp"
#include "heatseek/pipeline.hpp"
#include "heatseek/synth.hpp"

using namespace heatseek;

TEST_CASE("pipeline on a clean synthetic scene finds every hider") {
  SceneSpec spec;
  spec.seed = 2;
  spec.thermal_noise_sigma = 0;
  const SynthScene s = generate_scene(spec);
  const PipelineResult r = run_pipeline(s.rgb, s.thermal, s.map, s.oracle_detections, PipelineConfig{});
  CHECK(r.contours.size() == 5);
  REQUIRE(r.suspects.size() == 5);
  for (const auto& sus : r.suspects) {
    CHECK(sus.association == Association::kEnclosingBox);
    CHECK(std::any_of(s.truth.begin(), s.truth.end(), [&](const auto& t) { return t.hides_camera && t.box == sus.box; }));
  }
  const EvalReport e = evaluate(r.suspects, s.truth);
  CHECK(e.accuracy == 1.0);
  CHECK(e.mean_iou == 1.0);
}

TEST_CASE("pipeline applies the confidence and label filters") {
  SceneSpec spec;
  spec.seed = 2;
  spec.thermal_noise_sigma = 0;
  const SynthScene s = generate_scene(spec);
  auto dets = s.oracle_detections;
  for (auto& d : dets) d.confidence = 0.05;
  CHECK(run_pipeline(s.rgb, s.thermal, s.map, dets, PipelineConfig{}).suspects.empty());
  PipelineConfig low;
  low.min_confidence = 0.0;
  CHECK(run_pipeline(s.rgb, s.thermal, s.map, dets, low).suspects.size() == 5);

  dets = s.oracle_detections;
  for (auto& d : dets) d.label = "Person";
  CHECK(run_pipeline(s.rgb, s.thermal, s.map, dets, PipelineConfig{}).suspects.empty());
  PipelineConfig fb;
  fb.association.allow_fallback = true;
  const auto r = run_pipeline(s.rgb, s.thermal, s.map, {}, fb);
  CHECK(r.suspects.size() == 5);
  for (const auto& sus : r.suspects) CHECK(sus.association == Association::kContourFallback);
}

TEST_CASE("pipeline config parsing") {
  const PipelineConfig c = parse_pipeline_config(R"({
    "threshold_mode": "absolute", "threshold_param": 25.5, "min_contour_area": 9,
    "min_confidence": 0.3, "deny_labels": "person, cat", "fallback": true, "fallback_margin": 5,
    "match_tau": 0.2, "rgb": "a.png", "image_id": "x"})");
  CHECK(c.threshold.mode == ThresholdMode::kAbsolute);
  CHECK(c.threshold.param == 25.5);
  CHECK(c.min_contour_area == 9);
  CHECK(c.min_confidence == 0.3);
  CHECK(c.deny_labels == std::set<std::string>{"person", "cat"});
  CHECK(c.association.allow_fallback);
  CHECK(c.association.fallback_margin == 5);
  CHECK(c.match_tau == 0.2);
  CHECK(c.rgb == std::filesystem::path("a.png"));
  CHECK(c.image_id == std::string("x"));

  const PipelineConfig d = parse_pipeline_config(R"({"deny_labels": []})");
  CHECK(d.deny_labels.empty());
  CHECK(d.min_confidence == kDefaultMinConfidence);

  CHECK_THROWS_WITH_AS(parse_pipeline_config(R"({"threshold": 3})"), doctest::Contains("unknown key"), Error);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"min_confidence": 2})"), Error);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"min_contour_area": 0})"), Error);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"threshold_mode": "otsu"})"), Error);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"match_tau": -0.1})"), Error);
  CHECK_THROWS_AS(parse_pipeline_config("[]"), Error);
}

TEST_CASE("label list parsing") {
  CHECK(parse_label_list("person,oven") == std::set<std::string>{"person", "oven"});
  CHECK(parse_label_list(" a , b ,,") == std::set<std::string>{"a", "b"});
  CHECK(parse_label_list("").empty());
}
