#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "heatseek/detection.hpp"
#include "heatseek/geometry.hpp"
#include "heatseek/thermal.hpp"

namespace heatseek {

enum class Association { kEnclosingBox, kContourFallback };

// Predicate deciding whether a detection box accounts for a heat contour.
enum class AssociationRule {
  kCentroid,  // box contains the contour centroid
  kOverlap,   // fraction of the contour bbox inside the box >= overlap_threshold
};

struct SuspectRegion {
  Box2D box;
  std::string label;
  std::vector<int> source_contours;
  Association association = Association::kEnclosingBox;

  friend bool operator==(const SuspectRegion&, const SuspectRegion&) = default;
};

struct AssociationOptions {
  bool allow_fallback = false;
  double fallback_margin = 20.0;  // pixels added on every side of the contour bbox
  AssociationRule rule = AssociationRule::kCentroid;
  double overlap_threshold = 0.5;
  std::string fallback_label = "heat-trace";
};

/// Picks, for each contour, the smallest detection box that accounts for it
/// (ties: lowest y, then x, then input order); contours that pick the same box
/// merge into one region. Unclaimed contours become dilated-bbox fallback
/// regions when allowed and are dropped otherwise. Regions are ordered by
/// their first contour.
std::vector<SuspectRegion> associate(std::span<const HeatContour> contours, std::span<const Detection> dets,
                                     const AssociationOptions& opts = {});

// Drops regions whose label matches the deny list, ignoring case.
std::vector<SuspectRegion> filter_labels(std::span<const SuspectRegion> suspects,
                                         const std::set<std::string>& denylist);

std::set<std::string> default_deny_labels();

std::string to_string(Association a);
Association association_from_string(const std::string& s);

std::string suspects_to_json(std::span<const SuspectRegion> suspects);
std::vector<SuspectRegion> parse_suspects(const std::string& text, const std::string& source = "suspects");
std::vector<SuspectRegion> load_suspects_file(const std::filesystem::path& path);

}  // namespace heatseek
