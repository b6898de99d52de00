#include "spx/segmentation.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "spx/error.hpp"
#include "spx/image.hpp"

namespace spx {

using nlohmann::json;

std::vector<PartLabel> canonical_table() {
  std::vector<PartLabel> table;
  table.reserve(kCanonicalParts.size());
  for (std::size_t i = 0; i < kCanonicalParts.size(); ++i) {
    table.push_back({static_cast<std::uint8_t>(i), std::string(kCanonicalParts[i])});
  }
  return table;
}

const std::string& SegmentationMap::name_of(std::uint8_t id) const {
  for (const auto& p : table_) {
    if (p.id == id) return p.name;
  }
  fail(ErrorCode::UnknownLabel, "label " + std::to_string(id) + " not in table");
}

SegmentationMap load_segmentation(int width, int height, std::vector<std::uint8_t> labels,
                                  std::vector<PartLabel> table) {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::DimensionMismatch, "segmentation dimensions must be positive");
  }
  if (labels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::DimensionMismatch, "label grid size does not match dimensions");
  }
  std::array<bool, 256> known{};
  std::set<std::string> names;
  for (const auto& p : table) {
    if (p.id == kBackgroundLabel) {
      fail(ErrorCode::UnknownLabel, "label 255 is reserved for background");
    }
    if (known[p.id] || !names.insert(p.name).second) {
      fail(ErrorCode::UnknownLabel, "duplicate entry for label " + std::to_string(p.id));
    }
    known[p.id] = true;
  }
  for (const auto v : labels) {
    if (v != kBackgroundLabel && !known[v]) {
      fail(ErrorCode::UnknownLabel, "label " + std::to_string(v) + " missing from table");
    }
  }
  std::sort(table.begin(), table.end(),
            [](const PartLabel& a, const PartLabel& b) { return a.id < b.id; });

  SegmentationMap map;
  map.width_ = width;
  map.height_ = height;
  map.labels_ = std::move(labels);
  map.table_ = std::move(table);
  return map;
}

AbstractionLevel::AbstractionLevel(int l) : level(l) {
  if (l < 0 || l > 3) {
    fail(ErrorCode::ConfigError, "abstraction level must be in 0..3, got " + std::to_string(l));
  }
}

namespace {

MergeTable level1_table() {
  MergeTable t{1, {}};
  for (const auto name : kCanonicalParts) {
    std::string dst(name);
    for (const std::string_view suffix : {"_front", "_back"}) {
      if (dst.ends_with(suffix)) dst.erase(dst.size() - suffix.size());
    }
    if (dst == "left_face" || dst == "right_face") dst = "face";
    t.merge.emplace(std::string(name), dst);
  }
  return t;
}

MergeTable level2_table() {
  return {2,
          {{"face", "face"},
           {"left_upper_arm", "left_arm"},
           {"left_lower_arm", "left_arm"},
           {"right_upper_arm", "right_arm"},
           {"right_lower_arm", "right_arm"},
           {"left_hand", "left_hand"},
           {"right_hand", "right_hand"},
           {"torso", "torso"},
           {"left_upper_leg", "left_leg"},
           {"left_lower_leg", "left_leg"},
           {"right_upper_leg", "right_leg"},
           {"right_lower_leg", "right_leg"},
           {"left_foot", "left_foot"},
           {"right_foot", "right_foot"}}};
}

MergeTable level3_table() {
  return {3,
          {{"face", "face"},
           {"left_arm", "left_arm"},
           {"left_hand", "left_arm"},
           {"right_arm", "right_arm"},
           {"right_hand", "right_arm"},
           {"torso", "torso"},
           {"left_leg", "left_leg"},
           {"left_foot", "left_leg"},
           {"right_leg", "right_leg"},
           {"right_foot", "right_leg"}}};
}

}  // namespace

AbstractionTables AbstractionTables::defaults() {
  static const AbstractionTables tables = [] {
    std::vector<std::string> base(kCanonicalParts.begin(), kCanonicalParts.end());
    return from_steps(std::move(base), {level1_table(), level2_table(), level3_table()});
  }();
  return tables;
}

AbstractionTables AbstractionTables::from_steps(std::vector<std::string> base_vocabulary,
                                                std::vector<MergeTable> steps) {
  AbstractionTables t;
  t.vocabularies_.push_back(std::move(base_vocabulary));
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& prev = t.vocabularies_.back();
    const auto& step = steps[k];
    if (step.level != static_cast<int>(k) + 1) {
      fail(ErrorCode::ConfigError, "merge tables must be supplied in level order");
    }
    std::vector<std::string> next;
    for (const auto& name : prev) {
      const auto it = step.merge.find(name);
      if (it == step.merge.end()) {
        fail(ErrorCode::ConfigError,
             "merge table for level " + std::to_string(step.level) + " lacks '" + name + "'");
      }
      if (std::find(next.begin(), next.end(), it->second) == next.end()) {
        next.push_back(it->second);
      }
    }
    if (next.size() > 255) fail(ErrorCode::ConfigError, "vocabulary exceeds 255 names");
    t.vocabularies_.push_back(std::move(next));
  }
  t.steps_ = std::move(steps);
  return t;
}

const std::vector<std::string>& AbstractionTables::vocabulary(int level) const {
  return vocabularies_.at(static_cast<std::size_t>(level));
}

SegmentationMap remap_abstraction(const SegmentationMap& map, AbstractionLevel level,
                                  const AbstractionTables& tables) {
  if (level.level == 0) return map;
  if (level.level > tables.max_level()) {
    fail(ErrorCode::ConfigError, "no merge table for level " + std::to_string(level.level));
  }

  const auto& target = tables.vocabulary(level.level);
  auto resolve = [&](const std::string& name) -> std::uint8_t {
    std::string current = name;
    for (int k = 1; k <= level.level; ++k) {
      const auto& merge = tables.step(k).merge;
      if (const auto it = merge.find(current); it != merge.end()) {
        current = it->second;
        continue;
      }
      // Names that already belong to this or a coarser level pass through.
      bool coarser = false;
      for (int j = k; j <= tables.max_level() && !coarser; ++j) {
        const auto& v = tables.vocabulary(j);
        coarser = std::find(v.begin(), v.end(), current) != v.end();
      }
      if (!coarser) {
        fail(ErrorCode::NonCanonicalLabel, "part '" + name + "' is not in the merge vocabulary");
      }
    }
    const auto it = std::find(target.begin(), target.end(), current);
    if (it == target.end()) {
      fail(ErrorCode::NonCanonicalLabel, "part '" + name + "' does not reach level " +
                                             std::to_string(level.level));
    }
    return static_cast<std::uint8_t>(it - target.begin());
  };

  std::array<std::uint8_t, 256> lut;
  lut.fill(kBackgroundLabel);
  for (const auto& p : map.table()) lut[p.id] = resolve(p.name);

  std::vector<std::uint8_t> labels(map.labels().size());
  std::transform(map.labels().begin(), map.labels().end(), labels.begin(),
                 [&](std::uint8_t v) { return lut[v]; });

  std::vector<PartLabel> table;
  for (std::size_t i = 0; i < target.size(); ++i) {
    table.push_back({static_cast<std::uint8_t>(i), target[i]});
  }
  return load_segmentation(map.width(), map.height(), std::move(labels), std::move(table));
}

std::vector<ActivePart> active_parts(const SegmentationMap& map) {
  std::array<std::size_t, 256> counts{};
  for (const auto v : map.labels()) ++counts[v];
  std::vector<ActivePart> parts;
  for (const auto& p : map.table()) {
    if (counts[p.id] > 0) parts.push_back({p, counts[p.id]});
  }
  return parts;
}

Adjacency adjacency(const SegmentationMap& map) {
  Adjacency adj;
  auto link = [&](std::uint8_t a, std::uint8_t b) {
    if (a == b || a == kBackgroundLabel || b == kBackgroundLabel) return;
    adj.emplace(std::min(a, b), std::max(a, b));
  };
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const auto here = map.label_at(x, y);
      if (x + 1 < map.width()) link(here, map.label_at(x + 1, y));
      if (y + 1 < map.height()) link(here, map.label_at(x, y + 1));
    }
  }
  return adj;
}

bool adjacent(const Adjacency& adj, std::uint8_t a, std::uint8_t b) {
  return adj.contains({std::min(a, b), std::max(a, b)});
}

std::vector<PartLabel> parse_sidecar_json(const std::string& text) {
  std::vector<PartLabel> table;
  try {
    const auto doc = json::parse(text);
    for (const auto& [key, value] : doc.at("labels").items()) {
      const int id = std::stoi(key);
      if (id < 0 || id > 254) {
        fail(ErrorCode::UnknownLabel, "label id out of range: " + key);
      }
      table.push_back({static_cast<std::uint8_t>(id), value.get<std::string>()});
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed segmentation sidecar: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::IoError, "malformed label id in segmentation sidecar");
  }
  return table;
}

std::string segmentation_sidecar_json(const SegmentationMap& map) {
  json labels = json::object();
  for (const auto& p : map.table()) labels[std::to_string(p.id)] = p.name;
  return json{{"labels", labels}}.dump(2) + "\n";
}

SegmentationMap read_segmentation(const std::filesystem::path& png,
                                  const std::filesystem::path& sidecar) {
  auto gray = decode_png_gray(read_file(png));
  const auto bytes = read_file(sidecar);
  auto table = parse_sidecar_json(std::string(bytes.begin(), bytes.end()));
  return load_segmentation(gray.width, gray.height, std::move(gray.pixels), std::move(table));
}

void write_segmentation(const SegmentationMap& map, const std::filesystem::path& png,
                        const std::filesystem::path& sidecar) {
  write_file(png, encode_png_gray(map.width(), map.height(), map.labels()));
  write_file(sidecar, segmentation_sidecar_json(map));
}

MergeTable parse_merge_table(const std::string& text) {
  try {
    const auto doc = json::parse(text);
    MergeTable t;
    t.level = doc.at("level").get<int>();
    t.merge = doc.at("merge").get<std::map<std::string, std::string>>();
    return t;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("malformed merge table: ") + e.what());
  }
}

std::string merge_table_json(const MergeTable& table) {
  return json{{"level", table.level}, {"merge", table.merge}}.dump(2) + "\n";
}

}  // namespace spx
