#include "spx/masking.hpp"

#include <algorithm>
#include <cmath>

#include "spx/error.hpp"
#include "spx/random.hpp"

namespace spx {

std::string_view masking_name(MaskingKind kind) noexcept {
  switch (kind) {
    case MaskingKind::RemainingNoise: return "noise";
    case MaskingKind::NeighborNoise: return "neighbor";
    case MaskingKind::Inpaint: return "inpaint";
  }
  return "inpaint";
}

MaskingKind parse_masking(std::string_view name) {
  if (name == "noise") return MaskingKind::RemainingNoise;
  if (name == "neighbor") return MaskingKind::NeighborNoise;
  if (name == "inpaint") return MaskingKind::Inpaint;
  fail(ErrorCode::ConfigError, "unknown masking method '" + std::string(name) + "'");
}

NoiseModel<double> fit_noise_model(const Image& image, std::span<const std::size_t> pixels) {
  if (pixels.empty()) fail(ErrorCode::EmptyPixelSet, "cannot fit noise model to zero pixels");

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto i : pixels) {
    const auto c = image.at(i);
    mean += Eigen::Vector3d(c.r, c.g, c.b);
  }
  mean /= static_cast<double>(pixels.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto i : pixels) {
    const auto c = image.at(i);
    const Eigen::Vector3d d = Eigen::Vector3d(c.r, c.g, c.b) - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(pixels.size());
  cov += kNoiseRegularizer * Eigen::Matrix3d::Identity();
  return {mean, cov};
}

namespace {

std::vector<std::size_t> pixels_with_label(const SegmentationMap& map, std::uint8_t label) {
  std::vector<std::size_t> out;
  const auto& labels = map.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

std::vector<Rgb8> sample_noise(const NoiseModel<double>& model, std::size_t count,
                               std::uint64_t seed) {
  const Eigen::Matrix3d chol = model.covariance.llt().matrixL();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Rgb8> out(count);
  for (auto& px : out) {
    Eigen::Vector3d z;
    for (int k = 0; k < 3; ++k) z[k] = normal(rng);
    const Eigen::Vector3d v = model.mean + chol * z;
    px = {to_byte(v[0]), to_byte(v[1]), to_byte(v[2])};
  }
  return out;
}

void check_dimensions(const Image& image, const SegmentationMap& map) {
  if (image.width() != map.width() || image.height() != map.height()) {
    fail(ErrorCode::DimensionMismatch, "image and segmentation dimensions differ");
  }
}

MaskLayer noise_layer(const Image& image, const SegmentationMap& map, const PartLabel& part,
                      std::vector<std::size_t> part_pixels, const MaskingMethod& method) {
  std::vector<std::size_t> source;
  if (method.kind == MaskingKind::NeighborNoise) {
    const auto adj = adjacency(map);
    const auto& labels = map.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto l = labels[i];
      if (l != kBackgroundLabel && l != part.id && adjacent(adj, l, part.id)) {
        source.push_back(i);
      }
    }
  }
  if (source.empty()) {
    source = pixels_with_label(map, kBackgroundLabel);
    if (source.empty()) {
      fail(ErrorCode::NoBackgroundPixels, "noise masking needs background pixels");
    }
  }
  const auto model = fit_noise_model(image, source);
  const auto seed = derive_seed(method.seed.value_or(0), {kStreamNoise, part.id});
  MaskLayer layer{part.id, std::move(part_pixels), {}};
  layer.values = sample_noise(model, layer.pixels.size(), seed);
  return layer;
}

MaskLayer crop_layer(const Image& filled, std::uint8_t part, std::vector<std::size_t> pixels) {
  MaskLayer layer{part, std::move(pixels), {}};
  layer.values.reserve(layer.pixels.size());
  for (const auto i : layer.pixels) layer.values.push_back(filled.at(i));
  return layer;
}

}  // namespace

Image inpaint_all_parts(const Image& image, const SegmentationMap& map) {
  check_dimensions(image, map);
  const int w = image.width();
  const int h = image.height();
  const auto& labels = map.labels();

  std::vector<std::size_t> unknown;
  Eigen::Vector3d boundary_mean = Eigen::Vector3d::Zero();
  std::size_t known = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kBackgroundLabel) {
      const auto c = image.at(i);
      boundary_mean += Eigen::Vector3d(c.r, c.g, c.b);
      ++known;
    } else {
      unknown.push_back(i);
    }
  }
  Image out = image;
  if (unknown.empty()) return out;
  boundary_mean = known > 0 ? Eigen::Vector3d(boundary_mean / static_cast<double>(known))
                            : Eigen::Vector3d::Constant(128.0);

  // Working buffer in doubles, 3 channels per pixel.
  Eigen::Matrix<double, 3, Eigen::Dynamic> field(3, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = image.at(i);
    field.col(static_cast<Eigen::Index>(i)) = labels[i] == kBackgroundLabel
                                                  ? Eigen::Vector3d(c.r, c.g, c.b)
                                                  : boundary_mean;
  }

  if (known > 0) {
    Eigen::Matrix<double, 3, Eigen::Dynamic> next = field;
    for (int iter = 0; iter < kInpaintMaxIterations; ++iter) {
      double max_change = 0.0;
      for (const auto i : unknown) {
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        int n = 0;
        auto add = [&](int nx, int ny) {
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
          sum += field.col(static_cast<Eigen::Index>(image.index(nx, ny)));
          ++n;
        };
        add(x - 1, y);
        add(x + 1, y);
        add(x, y - 1);
        add(x, y + 1);
        const Eigen::Vector3d v = sum / static_cast<double>(n);
        const auto col = static_cast<Eigen::Index>(i);
        max_change = std::max(max_change, (v - field.col(col)).cwiseAbs().maxCoeff());
        next.col(col) = v;
      }
      field.swap(next);
      if (max_change < kInpaintTolerance) break;
      next = field;
    }
  }

  for (const auto i : unknown) {
    const auto c = field.col(static_cast<Eigen::Index>(i));
    out.set(i, {to_byte(c[0]), to_byte(c[1]), to_byte(c[2])});
  }
  return out;
}

MaskLayer build_mask_layer(const Image& image, const SegmentationMap& map,
                           const PartLabel& part, const MaskingMethod& method) {
  check_dimensions(image, map);
  auto pixels = pixels_with_label(map, part.id);
  if (pixels.empty()) {
    fail(ErrorCode::PartAbsent, "part '" + part.name + "' has no pixels in the map");
  }
  if (method.kind == MaskingKind::Inpaint) {
    return crop_layer(inpaint_all_parts(image, map), part.id, std::move(pixels));
  }
  return noise_layer(image, map, part, std::move(pixels), method);
}

std::vector<MaskLayer> build_mask_layers(const Image& image, const SegmentationMap& map,
                                         const MaskingMethod& method) {
  check_dimensions(image, map);
  const auto parts = active_parts(map);
  std::vector<MaskLayer> layers;
  layers.reserve(parts.size());
  if (method.kind == MaskingKind::Inpaint) {
    const auto filled = inpaint_all_parts(image, map);
    for (const auto& p : parts) {
      layers.push_back(crop_layer(filled, p.label.id, pixels_with_label(map, p.label.id)));
    }
    return layers;
  }
  for (const auto& p : parts) {
    layers.push_back(build_mask_layer(image, map, p.label, method));
  }
  return layers;
}

Image apply_presence(const Image& image, const SegmentationMap& map,
                     std::span<const MaskLayer> layers, std::span<const double> presence) {
  check_dimensions(image, map);
  if (presence.size() != layers.size()) {
    fail(ErrorCode::LengthMismatch, "presence vector has " + std::to_string(presence.size()) +
                                        " entries for " + std::to_string(layers.size()) +
                                        " parts");
  }
  Image out = image;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const double p = presence[k];
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::ConfigError, "presence values must lie in [0, 1]");
    }
    const auto& layer = layers[k];
    if (p == 1.0) continue;
    for (std::size_t j = 0; j < layer.pixels.size(); ++j) {
      const auto i = layer.pixels[j];
      const auto o = image.at(i);
      const auto m = layer.values[j];
      auto blend = [p](std::uint8_t a, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround(p * a + (1.0 - p) * b));
      };
      out.set(i, {blend(o.r, m.r), blend(o.g, m.g), blend(o.b, m.b)});
    }
  }
  return out;
}

}  // namespace spx
