#include "spx/quality.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "spx/error.hpp"

namespace spx {

BBox make_bbox(double x1, double y1, double x2, double y2) {
  BBox b{x1, y1, x2, y2};
  if (!b.well_formed()) {
    fail(ErrorCode::ConfigError, "bounding box requires x1 < x2 and y1 < y2");
  }
  return b;
}

double dice(const BBox& a, const BBox& b) noexcept {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0 || ih <= 0) return 0.0;
  return 2.0 * iw * ih / (a.area() + b.area());
}

QualityScore match_and_score(std::span<const Detection> detections, const BBox& gt,
                             const MatchOptions& options) {
  QualityScore best;
  double best_dice = -1.0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& d = detections[i];
    if (d.score < options.min_score) continue;
    if (options.label && d.label != *options.label) continue;
    const double dc = dice(d.bbox, gt);
    if (dc > best_dice || (dc == best_dice && d.score > best_score)) {
      best_dice = dc;
      best_score = d.score;
      best.matched_index = i;
    }
  }
  if (best.matched_index) best.value = best_dice * best_score;
  return best;
}

BBox parse_ground_truth(const std::string& json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const auto v = doc.at("gt_bbox").get<std::vector<double>>();
    if (v.size() != 4) fail(ErrorCode::ConfigError, "gt_bbox must have four coordinates");
    return make_bbox(v[0], v[1], v[2], v[3]);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed ground truth: ") + e.what());
  }
}

std::string ground_truth_json(const BBox& gt) {
  return nlohmann::json{{"gt_bbox", {gt.x1, gt.y1, gt.x2, gt.y2}}}.dump() + "\n";
}

}  // namespace spx
