#include "heatseek/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

#include "heatseek/error.hpp"
#include "heatseek/io.hpp"
#include "json_util.hpp"

namespace heatseek {

using detail::Json;
using detail::OrderedJson;

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool accounts_for(const Detection& d, const HeatContour& c, const AssociationOptions& opts) {
  if (opts.rule == AssociationRule::kCentroid) return box_contains(d.box, c.centroid);
  const double area = c.bbox.area();
  return area > 0.0 && intersection_area(d.box, c.bbox) / area >= opts.overlap_threshold;
}

// Smaller area first, then top-most, then left-most. Index breaks exact ties.
bool more_specific(const Detection& a, std::size_t ia, const Detection& b, std::size_t ib) {
  if (a.box.area() != b.box.area()) return a.box.area() < b.box.area();
  if (a.box.y != b.box.y) return a.box.y < b.box.y;
  if (a.box.x != b.box.x) return a.box.x < b.box.x;
  return ia < ib;
}

}  // namespace

std::vector<SuspectRegion> associate(std::span<const HeatContour> contours, std::span<const Detection> dets,
                                     const AssociationOptions& opts) {
  if (!(opts.fallback_margin >= 0.0) || !std::isfinite(opts.fallback_margin))
    throw Error("fallback margin must be a non-negative number");

  std::vector<SuspectRegion> out;
  std::map<std::size_t, std::size_t> region_of_detection;
  for (const auto& c : contours) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (!accounts_for(dets[i], c, opts)) continue;
      if (!best || more_specific(dets[i], i, dets[*best], *best)) best = i;
    }
    if (best) {
      auto [it, inserted] = region_of_detection.try_emplace(*best, out.size());
      if (inserted) out.push_back({dets[*best].box, dets[*best].label, {}, Association::kEnclosingBox});
      out[it->second].source_contours.push_back(c.id);
    } else if (opts.allow_fallback) {
      out.push_back({dilated(c.bbox, opts.fallback_margin), opts.fallback_label, {c.id},
                     Association::kContourFallback});
    }
  }
  return out;
}

std::vector<SuspectRegion> filter_labels(std::span<const SuspectRegion> suspects,
                                         const std::set<std::string>& denylist) {
  std::set<std::string> deny;
  for (const auto& l : denylist) deny.insert(lowercase(l));
  std::vector<SuspectRegion> out;
  for (const auto& s : suspects)
    if (!deny.contains(lowercase(s.label))) out.push_back(s);
  return out;
}

std::set<std::string> default_deny_labels() { return {"person", "oven"}; }

std::string to_string(Association a) {
  return a == Association::kEnclosingBox ? "enclosing-box" : "contour-fallback";
}

Association association_from_string(const std::string& s) {
  if (s == "enclosing-box") return Association::kEnclosingBox;
  if (s == "contour-fallback") return Association::kContourFallback;
  throw Error("unknown association '" + s + "'");
}

std::string suspects_to_json(std::span<const SuspectRegion> suspects) {
  OrderedJson list = OrderedJson::array();
  for (const auto& s : suspects)
    list.push_back({{"box", detail::box_to_json(s.box)},
                    {"label", s.label},
                    {"association", to_string(s.association)},
                    {"source_contours", s.source_contours}});
  return list.dump(2) + "\n";
}

std::vector<SuspectRegion> parse_suspects(const std::string& text, const std::string& source) {
  const Json root = detail::parse_json(text, source);
  detail::require_array(root, "root");
  std::vector<SuspectRegion> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    SuspectRegion s;
    s.box = detail::box_from_json(detail::require(root[i], "box", at), at + ".box");
    s.label = detail::require_string(detail::require(root[i], "label", at), at + ".label");
    const std::string assoc = detail::require_string(detail::require(root[i], "association", at), at + ".association");
    if (assoc != "enclosing-box" && assoc != "contour-fallback")
      detail::schema_violation(at + ".association", "unknown value '" + assoc + "'");
    s.association = association_from_string(assoc);
    const Json& ids = detail::require_array(detail::require(root[i], "source_contours", at), at + ".source_contours");
    for (const auto& id : ids) {
      if (!id.is_number_integer()) detail::schema_violation(at + ".source_contours", "expected integers");
      s.source_contours.push_back(id.get<int>());
    }
    if (s.source_contours.empty()) detail::schema_violation(at + ".source_contours", "must be non-empty");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SuspectRegion> load_suspects_file(const std::filesystem::path& path) {
  return parse_suspects(io::read_text(path), path.string());
}

}  // namespace heatseek
