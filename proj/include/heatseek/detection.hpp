#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heatseek/geometry.hpp"
#include "heatseek/image.hpp"

namespace heatseek {

inline constexpr double kDefaultMinConfidence = 0.1;

struct Detection {
  Box2D box;
  std::string label;
  double confidence = 1.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Positive-area finite box, non-empty label, confidence in [0, 1].
bool is_valid(const Detection& d);

// Source of object boxes for an RGB image.
class DetectionProvider {
 public:
  virtual ~DetectionProvider() = default;
  virtual std::vector<Detection> detect(const ImageGrid& rgb) const = 0;
};

// Runs a provider and rejects any output that breaks the Detection invariants.
std::vector<Detection> checked_detect(const DetectionProvider& provider, const ImageGrid& rgb);

/// Reads the detections for one image from a detections file:
///   {"images":[{"id":..., "detections":[{"box":[x,y,w,h],"label":...,"confidence":...}]}]}
/// Without an image id the file must hold at most one image entry.
std::vector<Detection> load_detections_file(const std::filesystem::path& path,
                                            const std::optional<std::string>& image_id);
std::vector<Detection> parse_detections(const std::string& text, const std::optional<std::string>& image_id,
                                        const std::string& source = "detections");
std::string detections_to_json(const std::string& image_id, std::span<const Detection> dets);

// Pre-computed detector output for a single image; returns it for any input image.
class FileDetectionProvider final : public DetectionProvider {
 public:
  FileDetectionProvider(const std::filesystem::path& path, const std::optional<std::string>& image_id);
  std::vector<Detection> detect(const ImageGrid& rgb) const override;

 private:
  std::vector<Detection> dets_;
};

/// Luma-contrast segmentation for synthetic scenes: pixels whose luma differs
/// from `background_luma` by more than `tol`, grouped into 8-connected
/// components of at least 16 pixels. Every component becomes an "object"
/// detection with confidence 1.
std::vector<Detection> baseline_detect(const ImageGrid& rgb, double background_luma, double tol);

class BaselineDetector final : public DetectionProvider {
 public:
  BaselineDetector(double background_luma, double tol) : background_(background_luma), tol_(tol) {}
  std::vector<Detection> detect(const ImageGrid& rgb) const override {
    return baseline_detect(rgb, background_, tol_);
  }

 private:
  double background_;
  double tol_;
};

// Median luma over the image; the usual background estimate for baseline_detect.
double median_luma(const ImageGrid& rgb);

std::vector<Detection> filter_confidence(std::span<const Detection> dets, double min_conf);

}  // namespace heatseek
