#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spx/image.hpp"
#include "spx/segmentation.hpp"

namespace spx {

enum class MaskingKind { RemainingNoise, NeighborNoise, Inpaint };

/// CLI vocabulary: noise | neighbor | inpaint.
std::string_view masking_name(MaskingKind kind) noexcept;
MaskingKind parse_masking(std::string_view name);

struct MaskingMethod {
  MaskingKind kind = MaskingKind::Inpaint;
  std::optional<std::uint64_t> seed;  // engaged iff kind is a noise method

  static MaskingMethod remaining_noise(std::uint64_t seed) {
    return {MaskingKind::RemainingNoise, seed};
  }
  static MaskingMethod neighbor_noise(std::uint64_t seed) {
    return {MaskingKind::NeighborNoise, seed};
  }
  static MaskingMethod inpaint() { return {MaskingKind::Inpaint, std::nullopt}; }
};

inline constexpr double kNoiseRegularizer = 1e-6;
inline constexpr int kInpaintMaxIterations = 500;
inline constexpr double kInpaintTolerance = 0.1;

template <typename Scalar = double>
struct NoiseModel {
  Eigen::Matrix<Scalar, 3, 1> mean;
  Eigen::Matrix<Scalar, 3, 3> covariance;  // population covariance + eps * I
};

/// Mean and regularized population covariance of RGB values over `pixels`
/// (flat pixel indices). Throws EmptyPixelSet.
NoiseModel<double> fit_noise_model(const Image& image, std::span<const std::size_t> pixels);

/// Replacement content for one part: values for exactly that part's pixels.
struct MaskLayer {
  std::uint8_t part = 0;
  std::vector<std::size_t> pixels;  // ascending flat indices
  std::vector<Rgb8> values;         // same length as `pixels`
};

MaskLayer build_mask_layer(const Image& image, const SegmentationMap& map,
                           const PartLabel& part, const MaskingMethod& method);

/// Layers for every active part, in active-part order. Inpaint is solved
/// once with all parts removed and cropped per part.
std::vector<MaskLayer> build_mask_layers(const Image& image, const SegmentationMap& map,
                                         const MaskingMethod& method);

/// Diffusion fill of every non-background pixel from the surrounding background.
Image inpaint_all_parts(const Image& image, const SegmentationMap& map);

/// Blends each part between its layer (presence 0) and the original (presence 1).
Image apply_presence(const Image& image, const SegmentationMap& map,
                     std::span<const MaskLayer> layers, std::span<const double> presence);

}  // namespace spx
