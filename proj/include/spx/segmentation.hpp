#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spx {

inline constexpr std::uint8_t kBackgroundLabel = 255;

struct PartLabel {
  std::uint8_t id = 0;
  std::string name;

  friend bool operator==(const PartLabel&, const PartLabel&) = default;
};

/// The 24 body-part names, indexed by label id.
inline constexpr std::array<std::string_view, 24> kCanonicalParts = {
    "left_face",
    "right_face",
    "left_upper_arm_front",
    "left_upper_arm_back",
    "right_upper_arm_front",
    "right_upper_arm_back",
    "left_lower_arm_front",
    "left_lower_arm_back",
    "right_lower_arm_front",
    "right_lower_arm_back",
    "left_hand",
    "right_hand",
    "torso_front",
    "torso_back",
    "left_upper_leg_front",
    "left_upper_leg_back",
    "right_upper_leg_front",
    "right_upper_leg_back",
    "left_lower_leg_front",
    "left_lower_leg_back",
    "right_lower_leg_front",
    "right_lower_leg_back",
    "left_foot",
    "right_foot",
};

std::vector<PartLabel> canonical_table();

/// Per-pixel part labels for one pedestrian instance. Immutable once built.
class SegmentationMap {
 public:
  SegmentationMap() = default;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  const std::vector<PartLabel>& table() const noexcept { return table_; }

  std::uint8_t label_at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }

  /// Name for a label id present in the table.
  const std::string& name_of(std::uint8_t id) const;

  friend SegmentationMap load_segmentation(int width, int height,
                                           std::vector<std::uint8_t> labels,
                                           std::vector<PartLabel> table);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
  std::vector<PartLabel> table_;
};

/// Validates and builds a map. Throws DimensionMismatch or UnknownLabel.
SegmentationMap load_segmentation(int width, int height, std::vector<std::uint8_t> labels,
                                  std::vector<PartLabel> table);

struct AbstractionLevel {
  int level = 0;

  explicit AbstractionLevel(int l);
  AbstractionLevel() = default;
};

/// One merge step: names of the previous level mapped onto the coarser level.
struct MergeTable {
  int level = 0;
  std::map<std::string, std::string> merge;
};

/// Stepwise merge tables for levels 1..3 plus the resulting vocabularies.
class AbstractionTables {
 public:
  /// Builds the default body-part hierarchy (24 -> 14 -> 10 -> 6).
  static AbstractionTables defaults();
  /// `steps[k]` is the table producing level k + 1.
  static AbstractionTables from_steps(std::vector<std::string> base_vocabulary,
                                      std::vector<MergeTable> steps);

  const std::vector<std::string>& vocabulary(int level) const;
  int max_level() const noexcept { return static_cast<int>(steps_.size()); }
  const MergeTable& step(int level) const { return steps_.at(static_cast<std::size_t>(level - 1)); }

 private:
  std::vector<MergeTable> steps_;
  std::vector<std::vector<std::string>> vocabularies_;
};

SegmentationMap remap_abstraction(const SegmentationMap& map, AbstractionLevel level,
                                  const AbstractionTables& tables = AbstractionTables::defaults());

struct ActivePart {
  PartLabel label;
  std::size_t area = 0;

  friend bool operator==(const ActivePart&, const ActivePart&) = default;
};

/// Parts with at least one pixel, ascending by label id. This ordering
/// defines the presence-vector feature index.
std::vector<ActivePart> active_parts(const SegmentationMap& map);

/// Unordered 4-neighbour adjacency between parts; pairs stored with first < second.
using Adjacency = std::set<std::pair<std::uint8_t, std::uint8_t>>;
Adjacency adjacency(const SegmentationMap& map);
bool adjacent(const Adjacency& adj, std::uint8_t a, std::uint8_t b);

// File formats: 8-bit gray PNG of label indices + sidecar JSON
// {"labels": {"<id>": "<name>"}}; merge tables {"level": n, "merge": {...}}.
SegmentationMap read_segmentation(const std::filesystem::path& png,
                                  const std::filesystem::path& sidecar);
void write_segmentation(const SegmentationMap& map, const std::filesystem::path& png,
                        const std::filesystem::path& sidecar);
std::string segmentation_sidecar_json(const SegmentationMap& map);
std::vector<PartLabel> parse_sidecar_json(const std::string& text);
MergeTable parse_merge_table(const std::string& text);
std::string merge_table_json(const MergeTable& table);

}  // namespace spx
