#include "heatseek/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heatseek/components.hpp"
#include "heatseek/error.hpp"
#include "json_util.hpp"

namespace heatseek {

std::size_t HeatMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

double threshold_cutoff(const ThermalGrid& t, const ThresholdSpec& spec) {
  if (!std::isfinite(spec.param)) throw Error("invalid threshold parameter");
  if (spec.mode == ThresholdMode::kAbsolute) return spec.param;
  const auto temps = t.temps();
  const double med = median_of({temps.begin(), temps.end()});
  const double sigma = mad_sigma(temps, med);
  if (sigma == 0.0) return med + kFlatBackgroundOffsetC;
  return med + spec.param * sigma;
}

HeatMask threshold_mask(const ThermalGrid& t, const ThresholdSpec& spec) {
  HeatMask m;
  m.width = t.width();
  m.height = t.height();
  m.threshold_used = threshold_cutoff(t, spec);
  const auto temps = t.temps();
  m.bits.resize(temps.size());
  std::transform(temps.begin(), temps.end(), m.bits.begin(),
                 [cut = m.threshold_used](double v) { return static_cast<std::uint8_t>(v > cut); });
  return m;
}

std::vector<HeatContour> extract_contours(const HeatMask& m, const ThermalGrid& source, int min_area) {
  if (min_area < 1) throw Error("min_area must be at least 1");
  if (source.width() != m.width || source.height() != m.height)
    throw Error("mask and source grid dimensions differ");

  std::vector<HeatContour> out;
  for (const auto& comp : label_components(m.width, m.height, m.bits)) {
    if (comp.size() < static_cast<std::size_t>(min_area)) continue;
    HeatContour c;
    c.pixel_count = comp.size();
    c.centroid = comp.centroid();
    c.bbox = comp.bbox();
    const auto temps = source.temps();
    c.peak_temp = std::transform_reduce(comp.pixels.begin(), comp.pixels.end(), -INFINITY,
                                        [](double a, double b) { return std::max(a, b); },
                                        [&](std::size_t i) { return temps[i]; });
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const HeatContour& a, const HeatContour& b) {
    if (a.pixel_count != b.pixel_count) return a.pixel_count > b.pixel_count;
    if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
    return a.bbox.x < b.bbox.x;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

std::string contours_to_json(std::span<const HeatContour> contours) {
  detail::OrderedJson list = detail::OrderedJson::array();
  for (const auto& c : contours)
    list.push_back({{"id", c.id},
                    {"pixel_count", c.pixel_count},
                    {"centroid", detail::OrderedJson::array({c.centroid.x, c.centroid.y})},
                    {"bbox", detail::box_to_json(c.bbox)},
                    {"peak_temp", c.peak_temp}});
  return list.dump(2) + "\n";
}

}  // namespace heatseek
