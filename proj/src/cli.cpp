#include "heatseek/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "heatseek/detection.hpp"
#include "heatseek/error.hpp"
#include "heatseek/eval.hpp"
#include "heatseek/io.hpp"
#include "heatseek/pipeline.hpp"
#include "heatseek/registration.hpp"
#include "heatseek/synth.hpp"

namespace heatseek::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kBaselineTolerance = 0.1;

void require_file(const std::optional<fs::path>& p, const char* flag) {
  if (!p) throw Error(std::string("missing required input ") + flag);
  if (!fs::is_regular_file(*p)) throw Error("missing input file: " + p->string());
}

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  return dir;
}

struct CalibrateArgs {
  std::string pairs;
  std::string out = ".";
};

struct ScanArgs {
  std::string config, rgb, thermal, map, detections, image_id, truth, out;
  std::string threshold_mode, deny_labels;
  double threshold_param = 0, min_confidence = 0, fallback_margin = 0, match_tau = 0;
  int min_contour_area = 0;
  bool fallback = false;
  bool debug = false;
};

struct SynthArgs {
  std::string spec;
  std::string out;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string suspects, truth, out;
  double match_tau = kDefaultMatchTau;
};

int do_calibrate(const CalibrateArgs& a, std::ostream& out) {
  require_file(fs::path(a.pairs), "--pairs");
  const auto pairs = load_correspondences_file(a.pairs);
  const AffineMap m = fit_affine(pairs);
  const fs::path dest = ensure_dir(a.out) / "map.json";
  io::write_text(dest, map_to_json(m));
  out << "residual_rms " << io::format_double(m.residual_rms()) << "\n";
  return kExitOk;
}

int do_scan(const CLI::App& sub, const ScanArgs& a, std::ostream& out) {
  PipelineConfig cfg;
  if (sub.count("--config")) {
    require_file(fs::path(a.config), "--config");
    cfg = parse_pipeline_config(io::read_text(a.config), cfg, a.config);
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--rgb")) cfg.rgb = a.rgb;
  if (given("--thermal")) cfg.thermal = a.thermal;
  if (given("--map")) cfg.map = a.map;
  if (given("--detections")) cfg.detections = a.detections;
  if (given("--image-id")) cfg.image_id = a.image_id;
  if (given("--truth")) cfg.truth = a.truth;
  if (given("--out")) cfg.out = a.out;
  if (given("--threshold-mode")) cfg.threshold.mode = threshold_mode_from_string(a.threshold_mode);
  if (given("--threshold-param")) cfg.threshold.param = a.threshold_param;
  if (given("--min-contour-area")) cfg.min_contour_area = a.min_contour_area;
  if (given("--min-confidence")) cfg.min_confidence = a.min_confidence;
  if (given("--deny-labels")) cfg.deny_labels = parse_label_list(a.deny_labels);
  if (given("--fallback")) cfg.association.allow_fallback = a.fallback;
  if (given("--fallback-margin")) cfg.association.fallback_margin = a.fallback_margin;
  if (given("--match-tau")) cfg.match_tau = a.match_tau;
  validate(cfg);

  require_file(cfg.rgb, "--rgb");
  require_file(cfg.thermal, "--thermal");
  require_file(cfg.map, "--map");
  if (cfg.detections) require_file(cfg.detections, "--detections");
  if (cfg.truth) require_file(cfg.truth, "--truth");
  if (!cfg.out) throw Error("missing required output --out");

  const ImageGrid rgb = io::load_png(*cfg.rgb);
  const ThermalGrid thermal = io::load_thermal(*cfg.thermal);
  const AffineMap map = load_map_file(*cfg.map);
  std::vector<Detection> dets = cfg.detections ? load_detections_file(*cfg.detections, cfg.image_id)
                                               : checked_detect(BaselineDetector(median_luma(rgb), kBaselineTolerance), rgb);
  std::vector<GroundTruthObject> truth;
  if (cfg.truth) truth = load_truth_file(*cfg.truth);

  const PipelineResult r = run_pipeline(rgb, thermal, map, std::move(dets), cfg);

  const fs::path dir = ensure_dir(*cfg.out);
  io::write_text(dir / "suspects.json", suspects_to_json(r.suspects));
  io::save_png(render_overlay(rgb, r.suspects, truth), dir / "overlay.png");
  if (a.debug) {
    io::save_mask_png(r.mask.width, r.mask.height, r.mask.bits, dir / "mask.png");
    io::write_text(dir / "contours.json", contours_to_json(r.contours));
  }
  out << "contours " << r.contours.size() << "\n";
  out << "suspects " << r.suspects.size() << "\n";
  if (std::any_of(truth.begin(), truth.end(), [](const auto& t) { return t.hides_camera; }))
    out << report_table(evaluate(r.suspects, truth, cfg.match_tau));
  return kExitOk;
}

int do_synth(const CLI::App& sub, const SynthArgs& a, std::ostream& out) {
  SceneSpec spec;
  if (sub.count("--spec")) {
    require_file(fs::path(a.spec), "--spec");
    spec = parse_scene_spec(io::read_text(a.spec), a.spec);
  }
  if (sub.count("--seed")) spec.seed = a.seed;
  const SynthScene scene = generate_scene(spec);
  write_scene_bundle(scene, a.out);
  out << "scene " << a.out << ": " << scene.truth.size() << " objects, " << scene.hot_spots.size() << " hiders, "
      << scene.oracle_detections.size() << " detections\n";
  return kExitOk;
}

int do_eval(const CLI::App& sub, const EvalArgs& a, std::ostream& out) {
  require_file(fs::path(a.suspects), "--suspects");
  require_file(fs::path(a.truth), "--truth");
  const auto suspects = load_suspects_file(a.suspects);
  const auto truth = load_truth_file(a.truth);
  const EvalReport report = evaluate(suspects, truth, a.match_tau);
  const fs::path dir = sub.count("--out") ? fs::path(a.out) : fs::path(a.suspects).parent_path();
  io::write_text(ensure_dir(dir.empty() ? fs::path(".") : dir) / "report.json", report_to_json(report));
  out << report_table(report);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locate objects that may conceal active cameras from paired thermal and RGB images", "heatseek"};
  app.require_subcommand(1);

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit the thermal-to-RGB affine map from correspondences");
  calibrate->add_option("--pairs", cal.pairs, "Correspondence JSON file")->required();
  calibrate->add_option("--out", cal.out, "Output directory for map.json");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Run the detection pipeline on one RGB/thermal pair");
  scan->add_option("--config", sc.config, "Pipeline config JSON (flags override it)");
  scan->add_option("--rgb", sc.rgb, "RGB image (8-bit PNG)");
  scan->add_option("--thermal", sc.thermal, "Thermal grid (CSV or 16-bit PNG with sidecar)");
  scan->add_option("--map", sc.map, "Affine map JSON");
  scan->add_option("--detections", sc.detections, "Detections JSON (baseline detector when absent)");
  scan->add_option("--image-id", sc.image_id, "Image id inside the detections file");
  scan->add_option("--truth", sc.truth, "Ground truth JSON; drawn in the overlay and scored");
  scan->add_option("--out", sc.out, "Output directory");
  scan->add_option("--threshold-mode", sc.threshold_mode, "absolute or robust-sigma")
      ->check(CLI::IsMember({"absolute", "robust-sigma"}));
  scan->add_option("--threshold-param", sc.threshold_param, "Cutoff in C (absolute) or k (robust-sigma)");
  scan->add_option("--min-contour-area", sc.min_contour_area, "Minimum contour size in pixels");
  scan->add_option("--min-confidence", sc.min_confidence, "Minimum detection confidence");
  scan->add_option("--deny-labels", sc.deny_labels, "Comma-separated labels to discard");
  scan->add_flag("--fallback", sc.fallback, "Emit dilated contour boxes for unclaimed contours");
  scan->add_option("--fallback-margin", sc.fallback_margin, "Fallback dilation in pixels");
  scan->add_option("--match-tau", sc.match_tau, "IoU above which a target counts as found");
  scan->add_flag("--debug", sc.debug, "Also write mask.png and contours.json");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene bundle");
  synth->add_option("--spec", sy.spec, "Scene spec JSON (defaults when absent)");
  synth->add_option("--out", sy.out, "Output directory")->required();
  synth->add_option("--seed", sy.seed, "Override the spec seed");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score suspects against ground truth");
  eval->add_option("--suspects", ev.suspects, "Suspects JSON")->required();
  eval->add_option("--truth", ev.truth, "Ground truth JSON")->required();
  eval->add_option("--match-tau", ev.match_tau, "IoU above which a target counts as found");
  eval->add_option("--out", ev.out, "Output directory for report.json (default: beside the suspects file)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (calibrate->parsed()) return do_calibrate(cal, out);
    if (scan->parsed()) return do_scan(*scan, sc, out);
    if (synth->parsed()) return do_synth(*synth, sy, out);
    if (eval->parsed()) return do_eval(*eval, ev, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace heatseek::cli
