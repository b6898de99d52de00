#pragma once

#include <array>
#include <cstddef>

#include "spx/image.hpp"

namespace spx {

/// Blue -> white -> red, 256 entries.
extern const std::array<Rgb8, 256> kDivergingTable;
/// White -> purple, 256 entries.
extern const std::array<Rgb8, 256> kSequentialTable;

/// Index into a 256-entry table for `value` on a scale symmetric about zero
/// with half-width `bound`. Zero maps to 128, +bound to 255, -bound to 0.
std::size_t diverging_index(double value, double bound) noexcept;

/// Index for `value` on [0, upper]; 0 maps to 0, `upper` to 255.
std::size_t sequential_index(double value, double upper) noexcept;

}  // namespace spx
