#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace spx {

/// Axis-aligned box in pixel coordinates, origin top-left.
struct BBox {
  double x1 = 0;
  double y1 = 0;
  double x2 = 0;
  double y2 = 0;

  bool well_formed() const noexcept { return x1 < x2 && y1 < y2; }
  double area() const noexcept { return (x2 - x1) * (y2 - y1); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Throws ConfigError unless x1 < x2 and y1 < y2.
BBox make_bbox(double x1, double y1, double x2, double y2);

struct Detection {
  BBox bbox;
  double score = 0;
  std::string label;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Sorensen-Dice coefficient of two boxes: 2|A n B| / (|A| + |B|).
double dice(const BBox& a, const BBox& b) noexcept;

struct QualityScore {
  double value = 0;
  std::optional<std::size_t> matched_index;
};

struct MatchOptions {
  double min_score = 0.0;
  std::optional<std::string> label;
};

/// Picks the detection with maximum DICE against `gt` (ties: higher score,
/// then lower index) and returns DICE * score.
QualityScore match_and_score(std::span<const Detection> detections, const BBox& gt,
                             const MatchOptions& options = {});

/// Ground-truth annotation {"gt_bbox":[x1,y1,x2,y2]}.
BBox parse_ground_truth(const std::string& json_text);
std::string ground_truth_json(const BBox& gt);

}  // namespace spx
