#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "heatseek/cli.hpp"
#include "heatseek/error.hpp"
#include "heatseek/eval.hpp"
#include "heatseek/fusion.hpp"
#include "heatseek/pipeline.hpp"
#include "heatseek/registration.hpp"
#include "heatseek/synth.hpp"
#include "heatseek/thermal.hpp"

namespace py = pybind11;
using namespace heatseek;

namespace {

using Array2D = py::array_t<double, py::array::c_style | py::array::forcecast>;

ThermalGrid thermal_from_array(const Array2D& a) {
  if (a.ndim() != 2) throw Error("thermal array must be 2-D (height, width)");
  const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  return ThermalGrid(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> thermal_to_array(const ThermalGrid& t) {
  py::array_t<double> out({t.height(), t.width()});
  std::copy(t.temps().begin(), t.temps().end(), out.mutable_data());
  return out;
}

ImageGrid image_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() == 2)
    return ImageGrid(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 1,
                     std::vector<float>(a.data(), a.data() + a.size()));
  if (a.ndim() == 3)
    return ImageGrid(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), static_cast<int>(a.shape(2)),
                     std::vector<float>(a.data(), a.data() + a.size()));
  throw Error("image array must be (height, width) or (height, width, channels)");
}

py::array_t<float> image_to_array(const ImageGrid& img) {
  py::array_t<float> out({img.height(), img.width(), img.channels()});
  std::copy(img.samples().begin(), img.samples().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_heatseek, m) {
  m.doc() = "Thermal/RGB fusion for locating objects that may conceal cameras";
  py::register_exception<Error>(m, "HeatseekError", PyExc_ValueError);

  py::class_<Point2D>(m, "Point2D")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Point2D::x)
      .def_readwrite("y", &Point2D::y)
      .def("__eq__", [](const Point2D& a, const Point2D& b) { return a == b; })
      .def("__repr__", [](const Point2D& p) {
        std::ostringstream s;
        s << "Point2D(" << p.x << ", " << p.y << ")";
        return s.str();
      });

  py::class_<Box2D>(m, "Box2D")
      .def(py::init<double, double, double, double>(), py::arg("x"), py::arg("y"), py::arg("w"), py::arg("h"))
      .def_readwrite("x", &Box2D::x)
      .def_readwrite("y", &Box2D::y)
      .def_readwrite("w", &Box2D::w)
      .def_readwrite("h", &Box2D::h)
      .def_property_readonly("area", &Box2D::area)
      .def("__eq__", [](const Box2D& a, const Box2D& b) { return a == b; })
      .def("__repr__", [](const Box2D& b) {
        std::ostringstream s;
        s << "Box2D(" << b.x << ", " << b.y << ", " << b.w << ", " << b.h << ")";
        return s.str();
      });

  m.def("iou", &iou, py::arg("a"), py::arg("b"));
  m.def("box_contains", &box_contains, py::arg("box"), py::arg("point"));
  m.def("box_union_bounds", [](const std::vector<Box2D>& boxes) { return box_union_bounds(boxes); });

  py::class_<AffineMap>(m, "AffineMap")
      .def(py::init<>())
      .def(py::init<const std::array<double, 6>&, double>(), py::arg("coeffs"), py::arg("residual_rms") = 0.0)
      .def_property_readonly("coeffs", &AffineMap::coeffs)
      .def_property_readonly("residual_rms", &AffineMap::residual_rms)
      .def("apply", &AffineMap::apply)
      .def("inverse", &AffineMap::inverse);

  m.def(
      "fit_affine",
      [](const std::vector<std::pair<Point2D, Point2D>>& pairs) {
        std::vector<Correspondence> c;
        for (const auto& [t, r] : pairs) c.push_back({t, r});
        return fit_affine(c);
      },
      py::arg("pairs"), "Least-squares affine fit from (thermal, rgb) point pairs");
  m.def("apply_map", &apply_map, py::arg("map"), py::arg("point"));
  m.def(
      "warp_thermal",
      [](const Array2D& t, const AffineMap& map, int out_width, int out_height, std::optional<double> ambient) {
        return thermal_to_array(warp_thermal(thermal_from_array(t), map, out_width, out_height, ambient));
      },
      py::arg("thermal"), py::arg("map"), py::arg("out_width"), py::arg("out_height"), py::arg("ambient") = py::none());

  py::enum_<ThresholdMode>(m, "ThresholdMode")
      .value("ABSOLUTE", ThresholdMode::kAbsolute)
      .value("ROBUST_SIGMA", ThresholdMode::kRobustSigma);

  py::class_<HeatContour>(m, "HeatContour")
      .def_readonly("id", &HeatContour::id)
      .def_readonly("pixel_count", &HeatContour::pixel_count)
      .def_readonly("centroid", &HeatContour::centroid)
      .def_readonly("bbox", &HeatContour::bbox)
      .def_readonly("peak_temp", &HeatContour::peak_temp);

  m.def(
      "threshold_mask",
      [](const Array2D& t, ThresholdMode mode, double param) {
        const ThermalGrid grid = thermal_from_array(t);
        const HeatMask mask = threshold_mask(grid, {mode, param});
        py::array_t<bool> bits({mask.height, mask.width});
        std::transform(mask.bits.begin(), mask.bits.end(), bits.mutable_data(), [](std::uint8_t b) { return b != 0; });
        return py::make_tuple(bits, mask.threshold_used);
      },
      py::arg("thermal"), py::arg("mode") = ThresholdMode::kRobustSigma, py::arg("param") = 6.0,
      "Returns (mask, cutoff_celsius)");
  m.def(
      "extract_contours",
      [](const Array2D& t, ThresholdMode mode, double param, int min_area) {
        const ThermalGrid grid = thermal_from_array(t);
        return extract_contours(threshold_mask(grid, {mode, param}), grid, min_area);
      },
      py::arg("thermal"), py::arg("mode") = ThresholdMode::kRobustSigma, py::arg("param") = 6.0,
      py::arg("min_area") = kDefaultMinContourArea, "Thresholds the grid and returns its heat contours");

  py::class_<Detection>(m, "Detection")
      .def(py::init<Box2D, std::string, double>(), py::arg("box"), py::arg("label"), py::arg("confidence"))
      .def_readwrite("box", &Detection::box)
      .def_readwrite("label", &Detection::label)
      .def_readwrite("confidence", &Detection::confidence);
  m.def("filter_confidence", [](const std::vector<Detection>& d, double min_conf) { return filter_confidence(d, min_conf); },
        py::arg("detections"), py::arg("min_conf") = kDefaultMinConfidence);

  py::enum_<Association>(m, "Association")
      .value("ENCLOSING_BOX", Association::kEnclosingBox)
      .value("CONTOUR_FALLBACK", Association::kContourFallback);
  py::class_<SuspectRegion>(m, "SuspectRegion")
      .def(py::init<>())
      .def_readwrite("box", &SuspectRegion::box)
      .def_readwrite("label", &SuspectRegion::label)
      .def_readwrite("source_contours", &SuspectRegion::source_contours)
      .def_readwrite("association", &SuspectRegion::association);
  m.def(
      "associate",
      [](const std::vector<HeatContour>& c, const std::vector<Detection>& d, bool allow_fallback, double margin) {
        AssociationOptions o;
        o.allow_fallback = allow_fallback;
        o.fallback_margin = margin;
        return associate(c, d, o);
      },
      py::arg("contours"), py::arg("detections"), py::arg("allow_fallback") = false, py::arg("fallback_margin") = 20.0);
  m.def("filter_labels", [](const std::vector<SuspectRegion>& s, const std::set<std::string>& deny) {
    return filter_labels(s, deny);
  });

  py::class_<GroundTruthObject>(m, "GroundTruthObject")
      .def(py::init<std::string, Box2D, bool>(), py::arg("name"), py::arg("box"), py::arg("hides_camera"))
      .def_readwrite("name", &GroundTruthObject::name)
      .def_readwrite("box", &GroundTruthObject::box)
      .def_readwrite("hides_camera", &GroundTruthObject::hides_camera);
  py::class_<TargetScore>(m, "TargetScore")
      .def_readonly("name", &TargetScore::name)
      .def_readonly("best_iou", &TargetScore::best_iou)
      .def_readonly("matched", &TargetScore::matched);
  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("per_target", &EvalReport::per_target)
      .def_readonly("accuracy", &EvalReport::accuracy)
      .def_readonly("mean_iou", &EvalReport::mean_iou)
      .def_readonly("min_iou", &EvalReport::min_iou)
      .def_readonly("max_iou", &EvalReport::max_iou)
      .def_readonly("n_targets", &EvalReport::n_targets)
      .def_readonly("n_suspects", &EvalReport::n_suspects)
      .def("table", &report_table);
  m.def("evaluate",
        [](const std::vector<SuspectRegion>& s, const std::vector<GroundTruthObject>& t, double tau) {
          return evaluate(s, t, tau);
        },
        py::arg("suspects"), py::arg("truth"), py::arg("match_tau") = kDefaultMatchTau);

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init<>())
      .def_readwrite("seed", &SceneSpec::seed)
      .def_readwrite("rgb_width", &SceneSpec::rgb_width)
      .def_readwrite("rgb_height", &SceneSpec::rgb_height)
      .def_readwrite("thermal_width", &SceneSpec::thermal_width)
      .def_readwrite("thermal_height", &SceneSpec::thermal_height)
      .def_readwrite("n_objects", &SceneSpec::n_objects)
      .def_readwrite("n_hiders", &SceneSpec::n_hiders)
      .def_readwrite("object_size_min", &SceneSpec::object_size_min)
      .def_readwrite("object_size_max", &SceneSpec::object_size_max)
      .def_readwrite("hot_spot_delta", &SceneSpec::hot_spot_delta)
      .def_readwrite("hot_spot_sigma", &SceneSpec::hot_spot_sigma)
      .def_readwrite("ambient", &SceneSpec::ambient)
      .def_readwrite("thermal_noise_sigma", &SceneSpec::thermal_noise_sigma)
      .def_readwrite("detector_dropout", &SceneSpec::detector_dropout)
      .def_readwrite("dropped_hiders", &SceneSpec::dropped_hiders);

  py::class_<SynthScene>(m, "SynthScene")
      .def_property_readonly("rgb", [](const SynthScene& s) { return image_to_array(s.rgb); })
      .def_property_readonly("thermal", [](const SynthScene& s) { return thermal_to_array(s.thermal); })
      .def_readonly("truth", &SynthScene::truth)
      .def_readonly("oracle_detections", &SynthScene::oracle_detections)
      .def_readonly("map", &SynthScene::map)
      .def_readonly("hot_spots", &SynthScene::hot_spots)
      .def_readonly("dropped", &SynthScene::dropped);
  m.def("generate_scene", &generate_scene, py::arg("spec"));
  m.def("hot_spot_check", &hot_spot_check, py::arg("scene"));

  m.def(
      "scan",
      [](const py::array_t<float, py::array::c_style | py::array::forcecast>& rgb, const Array2D& thermal,
         const AffineMap& map, const std::vector<Detection>& detections, double min_confidence, bool allow_fallback) {
        PipelineConfig cfg;
        cfg.min_confidence = min_confidence;
        cfg.association.allow_fallback = allow_fallback;
        return run_pipeline(image_from_array(rgb), thermal_from_array(thermal), map, detections, cfg).suspects;
      },
      py::arg("rgb"), py::arg("thermal"), py::arg("map"), py::arg("detections"),
      py::arg("min_confidence") = kDefaultMinConfidence, py::arg("allow_fallback") = false,
      "Full pipeline on in-memory arrays; returns suspect regions");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line interface in-process; returns (exit_code, stdout, stderr)");
}
