#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spx/attribution.hpp"
#include "spx/detector.hpp"
#include "spx/image.hpp"
#include "spx/masking.hpp"
#include "spx/quality.hpp"
#include "spx/segmentation.hpp"

namespace spx {

/// One pedestrian to explain: image, its part segmentation and ground truth.
struct Instance {
  std::string name;
  Image image;
  SegmentationMap map;
  BBox gt;
};

/// Reads `<image>`, `<segmentation>` with its `.json` sidecar, and `<gt>`.
Instance load_instance(const std::filesystem::path& image, const std::filesystem::path& segmentation,
                       const std::filesystem::path& gt);
/// Sidecar path for a label PNG: `x.seg.png` -> `x.seg.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& segmentation);
/// Every `<stem>.png` in `dir` with matching `<stem>.seg.png` and `<stem>.gt.json`,
/// sorted by file name.
std::vector<Instance> load_instance_dir(const std::filesystem::path& dir);
void write_instance(const std::filesystem::path& dir, const Instance& instance);

/// The `count` instances with the largest ground-truth area, ties by name.
std::vector<Instance> select_largest(std::vector<Instance> instances, std::size_t count);

struct ExplainConfig {
  Method method = Method::KernelShap;
  MaskingKind masking = MaskingKind::Inpaint;
  int abstraction = 0;
  std::size_t n_samples = 2048;
  std::uint64_t seed = 0;
  BetaParams beta;
  BootstrapConfig bootstrap;
  MatchOptions match;
  bool resample_noise = false;
  int workers = 1;
};

struct PartInfo {
  std::uint8_t id = 0;
  std::string name;
  std::size_t area = 0;
};

struct ExplanationReport {
  ExplanationResult result;
  std::vector<PartInfo> parts;  // feature order
  int abstraction = 0;
  MaskingKind masking = MaskingKind::Inpaint;
  std::size_t n_samples = 0;  // requested budget
  std::uint64_t seed = 0;
  double q_full = 0;
  double q_empty = 0;
  double q_unperturbed = 0;
  std::string config_hash;
};

/// Masks, detects, scores and regresses one instance.
ExplanationReport explain_instance(const Instance& instance, const DetectorFactory& detector,
                                   const ExplainConfig& config, const std::string& config_hash = {});

std::string report_json(const ExplanationReport& report);
ExplanationReport parse_report_json(const std::string& text);

}  // namespace spx
