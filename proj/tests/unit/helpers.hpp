#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "spx/segmentation.hpp"

namespace spx::test {

/// Map whose parts are named "p<id>".
inline SegmentationMap grid_map(int width, int height, std::vector<std::uint8_t> labels) {
  std::vector<PartLabel> table;
  std::array<bool, 256> seen{};
  for (const auto v : labels) {
    if (v != kBackgroundLabel && !seen[v]) {
      seen[v] = true;
      table.push_back({v, "p" + std::to_string(v)});
    }
  }
  return load_segmentation(width, height, std::move(labels), std::move(table));
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(SPX_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace spx::test
