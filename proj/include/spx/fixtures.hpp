#pragma once

#include <cstdint>
#include <vector>

#include "spx/detector.hpp"
#include "spx/explain.hpp"

namespace spx::fixtures {

inline constexpr int kWidth = 64;
inline constexpr int kHeight = 128;

/// A blocky pedestrian covering all 24 parts on a textured background.
/// Position, size and colours vary with `index`; output is a pure
/// function of (index, seed).
Instance pedestrian(int index, std::uint64_t seed = 0);

std::vector<Instance> pedestrians(int count, std::uint64_t seed = 0);

/// Detector over the 14 level-1 parts with a dominant torso term and three
/// pairwise interactions; never leaves [0, 1].
ProductForm interaction_form();
/// Level-1 feature index of the dominant part (torso).
inline constexpr std::size_t kDominantPart = 7;

}  // namespace spx::fixtures
