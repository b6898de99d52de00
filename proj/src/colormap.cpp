#include <algorithm>
#include <cmath>

#include "spx/colormap.hpp"

namespace spx {

std::size_t diverging_index(double value, double bound) noexcept {
  if (!(bound > 0) || !std::isfinite(value)) return 128;
  const double t = std::clamp(value / bound, -1.0, 1.0);
  const auto idx = static_cast<long>(std::floor((t + 1.0) * 128.0));
  return static_cast<std::size_t>(std::clamp(idx, 0L, 255L));
}

std::size_t sequential_index(double value, double upper) noexcept {
  if (!(upper > 0) || !std::isfinite(value)) return 0;
  const double t = std::clamp(value / upper, 0.0, 1.0);
  const auto idx = static_cast<long>(std::floor(t * 256.0));
  return static_cast<std::size_t>(std::clamp(idx, 0L, 255L));
}

}  // namespace spx
