#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "heatseek/cli.hpp"
#include "heatseek/io.hpp"
#include "heatseek/pipeline.hpp"
#include "heatseek/synth.hpp"
#include "test_util.hpp"

using namespace heatseek;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path make_bundle(const std::string& name, const SceneSpec& spec) {
  const fs::path dir = test::scratch_dir(name);
  write_scene_bundle(generate_scene(spec), dir / "scene");
  return dir;
}

std::vector<std::string> scan_args(const fs::path& scene, const fs::path& out) {
  return {"scan", "--rgb", (scene / "rgb.png").string(), "--thermal", (scene / "thermal.csv").string(),
          "--map", (scene / "map.json").string(), "--detections", (scene / "detections.json").string(),
          "--truth", (scene / "truth.json").string(), "--out", out.string()};
}

}  // namespace

TEST_CASE("calibrate") {
  const fs::path dir = test::scratch_dir("cli_calibrate");
  io::write_text(dir / "identity.json",
                 R"([{"thermal":[0,0],"rgb":[0,0]},{"thermal":[79,0],"rgb":[79,0]},{"thermal":[0,59],"rgb":[0,59]},{"thermal":[79,59],"rgb":[79,59]}])");
  Run r = run({"calibrate", "--pairs", (dir / "identity.json").string(), "--out", (dir / "id").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("residual_rms") != std::string::npos);
  const AffineMap id = load_map_file(dir / "id" / "map.json");
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(id.coeffs()[i] - AffineMap().coeffs()[i]) < 1e-12);

  io::write_text(dir / "scale.json",
                 R"([{"thermal":[0,0],"rgb":[0,0]},{"thermal":[79,0],"rgb":[1896,0]},{"thermal":[0,59],"rgb":[0,1416]},{"thermal":[79,59],"rgb":[1896,1416]}])");
  r = run({"calibrate", "--pairs", (dir / "scale.json").string(), "--out", (dir / "scale").string()});
  CHECK(r.code == 0);
  const AffineMap s = load_map_file(dir / "scale" / "map.json");
  const std::array<double, 6> expected{24, 0, 0, 0, 24, 0};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(s.coeffs()[i] - expected[i]) < 1e-9);

  io::write_text(dir / "two.json", R"([{"thermal":[0,0],"rgb":[0,0]},{"thermal":[1,1],"rgb":[1,1]}])");
  r = run({"calibrate", "--pairs", (dir / "two.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("insufficient correspondences") != std::string::npos);

  io::write_text(dir / "line.json",
                 R"([{"thermal":[0,0],"rgb":[0,0]},{"thermal":[1,1],"rgb":[1,0]},{"thermal":[2,2],"rgb":[0,1]}])");
  r = run({"calibrate", "--pairs", (dir / "line.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("degenerate configuration") != std::string::npos);
}

TEST_CASE("synth writes a bundle") {
  const fs::path dir = test::scratch_dir("cli_synth");
  Run r = run({"synth", "--out", (dir / "a").string(), "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(load_truth_file(dir / "a" / "truth.json").size() == 22);
  r = run({"synth", "--out", (dir / "b").string(), "--seed", "5"});
  for (const char* f : {"rgb.png", "thermal.csv", "truth.json", "detections.json", "map.json", "spec.json"})
    CHECK(io::read_text(dir / "a" / f) == io::read_text(dir / "b" / f));

  io::write_text(dir / "bad.json", R"({"n_objects": 3, "n_hiders": 4})");
  r = run({"synth", "--spec", (dir / "bad.json").string(), "--out", (dir / "c").string()});
  CHECK(r.code == 2);
  io::write_text(dir / "crowded.json", R"({"n_objects": 300, "n_hiders": 0})");
  r = run({"synth", "--spec", (dir / "crowded.json").string(), "--out", (dir / "d").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("scene too crowded") != std::string::npos);
}

TEST_CASE("scan on synthetic bundles") {
  SceneSpec spec;
  spec.seed = 12;
  const fs::path dir = make_bundle("cli_scan", spec);
  Run r = run(scan_args(dir / "scene", dir / "out"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("suspects 5") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "overlay.png"));
  CHECK(load_suspects_file(dir / "out" / "suspects.json").size() == 5);

  // The command is the library pipeline plus serialization.
  const PipelineResult lib =
      run_pipeline(io::load_png(dir / "scene" / "rgb.png"), io::load_thermal(dir / "scene" / "thermal.csv"),
                   load_map_file(dir / "scene" / "map.json"),
                   load_detections_file(dir / "scene" / "detections.json", std::nullopt), PipelineConfig{});
  CHECK(io::read_text(dir / "out" / "suspects.json") == suspects_to_json(lib.suspects));

  spec.detector_dropout = 0.5;
  spec.dropped_hiders = 1;
  const fs::path drop = make_bundle("cli_scan_drop", spec);
  r = run(scan_args(drop / "scene", drop / "out"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("suspects 4") != std::string::npos);

  io::write_text(dir / "empty.json", R"({"images":[]})");
  auto args = scan_args(dir / "scene", dir / "empty_out");
  args[8] = (dir / "empty.json").string();
  r = run(args);
  CHECK(r.code == 0);
  CHECK(r.out.find("suspects 0") != std::string::npos);
  CHECK(io::read_text(dir / "empty_out" / "suspects.json") == "[]\n");

  // Baseline detector when no detections file is given.
  r = run({"scan", "--rgb", (dir / "scene" / "rgb.png").string(), "--thermal", (dir / "scene" / "thermal.csv").string(),
           "--map", (dir / "scene" / "map.json").string(), "--out", (dir / "baseline").string(), "--debug"});
  CHECK(r.code == 0);
  CHECK(r.out.find("suspects 5") != std::string::npos);
  CHECK(fs::exists(dir / "baseline" / "mask.png"));
  CHECK(fs::exists(dir / "baseline" / "contours.json"));
}

TEST_CASE("scan flags override the config file") {
  SceneSpec spec;
  spec.seed = 12;
  const fs::path dir = make_bundle("cli_config", spec);
  const fs::path scene = dir / "scene";
  io::write_text(dir / "cfg.json", R"({"rgb":")" + (scene / "rgb.png").string() + R"(","thermal":")" +
                                       (scene / "thermal.csv").string() + R"(","map":")" + (scene / "map.json").string() +
                                       R"(","detections":")" + (scene / "detections.json").string() +
                                       R"(","min_confidence":1.0,"deny_labels":"object","out":")" + (dir / "o").string() + "\"}");
  Run r = run({"scan", "--config", (dir / "cfg.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("suspects 0") != std::string::npos);
  r = run({"scan", "--config", (dir / "cfg.json").string(), "--deny-labels", "person"});
  CHECK(r.out.find("suspects 5") != std::string::npos);

  io::write_text(dir / "unknown.json", R"({"colour":"red"})");
  r = run({"scan", "--config", (dir / "unknown.json").string()});
  CHECK(r.code == 2);
}

TEST_CASE("scan input errors exit 2 and name the file") {
  SceneSpec spec;
  spec.seed = 12;
  spec.n_objects = 6;
  spec.n_hiders = 2;
  const fs::path dir = make_bundle("cli_scan_err", spec);
  auto args = scan_args(dir / "scene", dir / "out");
  args[4] = (dir / "nope.csv").string();
  Run r = run(args);
  CHECK(r.code == 2);
  CHECK(r.err.find("nope.csv") != std::string::npos);

  io::write_text(dir / "bad_det.json",
                 R"({"images":[{"id":"scene","detections":[{"box":[0,0,5,5],"label":"a","confidence":1.3}]}]})");
  args = scan_args(dir / "scene", dir / "out");
  args[8] = (dir / "bad_det.json").string();
  r = run(args);
  CHECK(r.code == 2);
  CHECK(r.err.find("confidence") != std::string::npos);

  args = scan_args(dir / "scene", dir / "out");
  args.push_back("--min-confidence");
  args.push_back("3");
  CHECK(run(args).code == 2);
  CHECK(run({"scan", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("eval") {
  const fs::path dir = test::scratch_dir("cli_eval");
  const std::vector<GroundTruthObject> truth{{"Lamp", {0, 0, 10, 10}, true}, {"Book", {20, 0, 10, 10}, false}};
  io::write_text(dir / "truth.json", truth_to_json(truth));
  const std::vector<SuspectRegion> perfect{{{0, 0, 10, 10}, "object", {0}, Association::kEnclosingBox}};
  io::write_text(dir / "perfect.json", suspects_to_json(perfect));
  Run r = run({"eval", "--suspects", (dir / "perfect.json").string(), "--truth", (dir / "truth.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("accuracy 1.000") != std::string::npos);
  CHECK(fs::exists(dir / "report.json"));

  io::write_text(dir / "none.json", "[]");
  r = run({"eval", "--suspects", (dir / "none.json").string(), "--truth", (dir / "truth.json").string(), "--out",
           (dir / "r").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("accuracy 0.000") != std::string::npos);

  io::write_text(dir / "no_targets.json", truth_to_json(std::vector<GroundTruthObject>{{"Book", {0, 0, 1, 1}, false}}));
  r = run({"eval", "--suspects", (dir / "none.json").string(), "--truth", (dir / "no_targets.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("no ground-truth targets") != std::string::npos);
}

TEST_CASE("scan with truth prints the score using --match-tau") {
  SceneSpec spec;
  spec.seed = 12;
  spec.detector_dropout = 0.5;
  spec.dropped_hiders = 1;
  const fs::path dir = make_bundle("cli_scan_truth", spec);
  Run r = run(scan_args(dir / "scene", dir / "out"));
  CHECK(r.out.find("accuracy 0.800 (4/5)") != std::string::npos);
  auto args = scan_args(dir / "scene", dir / "out");
  args.push_back("--match-tau");
  args.push_back("1.0");
  r = run(args);
  CHECK(r.out.find("accuracy 0.000 (0/5)") != std::string::npos);
}
