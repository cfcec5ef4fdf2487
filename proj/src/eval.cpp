#include "heatseek/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "heatseek/error.hpp"
#include "heatseek/io.hpp"
#include "json_util.hpp"

namespace heatseek {

using detail::Json;
using detail::OrderedJson;

std::size_t EvalReport::matched_count() const {
  return static_cast<std::size_t>(
      std::count_if(per_target.begin(), per_target.end(), [](const TargetScore& t) { return t.matched; }));
}

void validate_truth(std::span<const GroundTruthObject> truth) {
  std::set<std::string> names;
  for (const auto& t : truth) {
    if (!is_valid(t.box) || !(t.box.area() > 0.0)) throw Error("ground-truth box for '" + t.name + "' has no area");
    if (!names.insert(t.name).second) throw Error("duplicate ground-truth name '" + t.name + "'");
  }
}

EvalReport evaluate(std::span<const SuspectRegion> suspects, std::span<const GroundTruthObject> truth,
                    double match_tau) {
  if (!(match_tau >= 0.0 && match_tau <= 1.0)) throw Error("match_tau must lie in [0,1]");
  validate_truth(truth);

  EvalReport r;
  r.n_suspects = suspects.size();
  for (const auto& t : truth) {
    if (!t.hides_camera) continue;
    TargetScore s{t.name, 0.0, false};
    for (const auto& sus : suspects) s.best_iou = std::max(s.best_iou, iou(sus.box, t.box));
    s.matched = s.best_iou > match_tau;
    r.per_target.push_back(std::move(s));
  }
  r.n_targets = r.per_target.size();
  if (r.n_targets == 0) throw Error("no ground-truth targets");

  double sum = 0.0;
  r.min_iou = 1.0;
  r.max_iou = 0.0;
  for (const auto& s : r.per_target) {
    sum += s.best_iou;
    r.min_iou = std::min(r.min_iou, s.best_iou);
    r.max_iou = std::max(r.max_iou, s.best_iou);
  }
  const auto n = static_cast<double>(r.n_targets);
  r.mean_iou = sum / n;
  r.accuracy = static_cast<double>(r.matched_count()) / n;
  return r;
}

namespace {

void stroke(ImageGrid& img, const Box2D& box, float r, float g, float b) {
  const long x0 = std::max(0L, std::lround(box.x));
  const long y0 = std::max(0L, std::lround(box.y));
  const long x1 = std::min<long>(img.width(), std::lround(box.right()));
  const long y1 = std::min<long>(img.height(), std::lround(box.bottom()));
  constexpr long kBorder = 2;
  for (long y = y0; y < y1; ++y)
    for (long x = x0; x < x1; ++x) {
      const bool edge = x < x0 + kBorder || x >= x1 - kBorder || y < y0 + kBorder || y >= y1 - kBorder;
      if (!edge) continue;
      const int xi = static_cast<int>(x), yi = static_cast<int>(y);
      img.at(xi, yi, 0) = r;
      img.at(xi, yi, 1) = g;
      img.at(xi, yi, 2) = b;
    }
}

ImageGrid to_rgb(const ImageGrid& src) {
  if (src.channels() == 3) return src;
  ImageGrid out(src.width(), src.height(), 3);
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = src.at(x, y);
  return out;
}

}  // namespace

ImageGrid render_overlay(const ImageGrid& rgb, std::span<const SuspectRegion> suspects,
                         std::span<const GroundTruthObject> truth) {
  ImageGrid out = to_rgb(rgb);
  for (const auto& t : truth)
    if (t.hides_camera) stroke(out, t.box, 0.0f, 0.0f, 1.0f);
  for (const auto& s : suspects) stroke(out, s.box, 0.0f, 1.0f, 0.0f);
  return out;
}

std::string truth_to_json(std::span<const GroundTruthObject> truth) {
  OrderedJson list = OrderedJson::array();
  for (const auto& t : truth)
    list.push_back({{"name", t.name}, {"box", detail::box_to_json(t.box)}, {"hides_camera", t.hides_camera}});
  return list.dump(2) + "\n";
}

std::vector<GroundTruthObject> parse_truth(const std::string& text, const std::string& source) {
  const Json root = detail::parse_json(text, source);
  detail::require_array(root, "root");
  std::vector<GroundTruthObject> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    GroundTruthObject t;
    t.name = detail::require_string(detail::require(root[i], "name", at), at + ".name");
    t.box = detail::box_from_json(detail::require(root[i], "box", at), at + ".box");
    t.hides_camera = detail::require_bool(detail::require(root[i], "hides_camera", at), at + ".hides_camera");
    out.push_back(std::move(t));
  }
  validate_truth(out);
  return out;
}

std::vector<GroundTruthObject> load_truth_file(const std::filesystem::path& path) {
  return parse_truth(io::read_text(path), path.string());
}

std::string report_to_json(const EvalReport& r) {
  OrderedJson per = OrderedJson::array();
  for (const auto& t : r.per_target)
    per.push_back({{"name", t.name}, {"best_iou", t.best_iou}, {"matched", t.matched}});
  OrderedJson root{{"per_target", per},          {"accuracy", r.accuracy}, {"mean_iou", r.mean_iou},
                   {"min_iou", r.min_iou},       {"max_iou", r.max_iou},   {"n_targets", r.n_targets},
                   {"n_suspects", r.n_suspects}};
  return root.dump(2) + "\n";
}

std::string report_table(const EvalReport& r) {
  std::size_t width = 4;
  for (const auto& t : r.per_target) width = std::max(width, t.name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %s\n", static_cast<int>(width), "name", "best_iou", "matched");
  out += buf;
  for (const auto& t : r.per_target) {
    std::snprintf(buf, sizeof buf, "%-*s  %8.3f  %s\n", static_cast<int>(width), t.name.c_str(), t.best_iou,
                  t.matched ? "yes" : "no");
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "accuracy %.3f (%zu/%zu)  mean_iou %.3f  min_iou %.3f  max_iou %.3f  suspects %zu\n",
                r.accuracy, r.matched_count(), r.n_targets, r.mean_iou, r.min_iou, r.max_iou, r.n_suspects);
  out += buf;
  return out;
}

}  // namespace heatseek
