#include "heatseek/detection.hpp"

#include <cmath>

#include "heatseek/components.hpp"
#include "heatseek/error.hpp"
#include "heatseek/io.hpp"
#include "json_util.hpp"

namespace heatseek {

using detail::Json;
using detail::OrderedJson;

namespace {

constexpr std::size_t kBaselineMinPixels = 16;

}  // namespace

bool is_valid(const Detection& d) {
  return is_valid(d.box) && d.box.area() > 0.0 && !d.label.empty() && std::isfinite(d.confidence) &&
         d.confidence >= 0.0 && d.confidence <= 1.0;
}

std::vector<Detection> checked_detect(const DetectionProvider& provider, const ImageGrid& rgb) {
  auto dets = provider.detect(rgb);
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (!is_valid(dets[i])) throw Error("detection provider returned invalid detection " + std::to_string(i));
  return dets;
}

std::vector<Detection> parse_detections(const std::string& text, const std::optional<std::string>& image_id,
                                        const std::string& source) {
  const Json root = detail::parse_json(text, source);
  const Json& images = detail::require_array(detail::require(root, "images", "root"), "images");
  if (!image_id && images.size() > 1) throw Error("ambiguous image id: " + source + " holds several images");

  std::vector<Detection> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const std::string id = detail::require_string(detail::require(images[i], "id", where), where + ".id");
    const Json& list = detail::require_array(detail::require(images[i], "detections", where), where + ".detections");
    if (image_id && id != *image_id) continue;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string at = where + ".detections[" + std::to_string(k) + "]";
      Detection d;
      d.box = detail::box_from_json(detail::require(list[k], "box", at), at + ".box");
      d.label = detail::require_string(detail::require(list[k], "label", at), at + ".label");
      d.confidence = detail::require_number(detail::require(list[k], "confidence", at), at + ".confidence");
      if (!(d.box.area() > 0.0)) detail::schema_violation(at + ".box", "area must be positive");
      if (d.label.empty()) detail::schema_violation(at + ".label", "must be non-empty");
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
        detail::schema_violation(at + ".confidence", "must lie in [0,1]");
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<Detection> load_detections_file(const std::filesystem::path& path,
                                            const std::optional<std::string>& image_id) {
  return parse_detections(io::read_text(path), image_id, path.string());
}

std::string detections_to_json(const std::string& image_id, std::span<const Detection> dets) {
  OrderedJson list = OrderedJson::array();
  for (const auto& d : dets)
    list.push_back({{"box", detail::box_to_json(d.box)}, {"label", d.label}, {"confidence", d.confidence}});
  OrderedJson root{{"images", OrderedJson::array({OrderedJson{{"id", image_id}, {"detections", list}}})}};
  return root.dump(2) + "\n";
}

FileDetectionProvider::FileDetectionProvider(const std::filesystem::path& path,
                                             const std::optional<std::string>& image_id)
    : dets_(load_detections_file(path, image_id)) {}

std::vector<Detection> FileDetectionProvider::detect(const ImageGrid&) const { return dets_; }

std::vector<Detection> baseline_detect(const ImageGrid& rgb, double background_luma, double tol) {
  const int w = rgb.width(), h = rgb.height();
  std::vector<std::uint8_t> fg(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      fg[static_cast<std::size_t>(y) * w + x] = std::abs(rgb.luma(x, y) - background_luma) > tol;

  std::vector<Detection> out;
  for (const auto& comp : label_components(w, h, fg)) {
    if (comp.size() < kBaselineMinPixels) continue;
    out.push_back({comp.bbox(), "object", 1.0});
  }
  return out;
}

double median_luma(const ImageGrid& rgb) {
  std::vector<double> l;
  l.reserve(static_cast<std::size_t>(rgb.width()) * rgb.height());
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x) l.push_back(rgb.luma(x, y));
  return median_of(std::move(l));
}

std::vector<Detection> filter_confidence(std::span<const Detection> dets, double min_conf) {
  if (!(min_conf >= 0.0 && min_conf <= 1.0)) throw Error("min_confidence must lie in [0,1]");
  std::vector<Detection> out;
  for (const auto& d : dets)
    if (d.confidence >= min_conf) out.push_back(d);
  return out;
}

}  // namespace heatseek
