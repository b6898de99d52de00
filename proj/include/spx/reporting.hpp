#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spx/explain.hpp"

namespace spx {

// ---------------------------------------------------------------------------
// Relevance and error maps

inline constexpr double kOverlayAlpha = 0.6;
/// Smallest upper bound of the error colour scale, so numerically zero
/// stds stay in the lowest bin instead of being stretched to full range.
inline constexpr double kErrorScaleFloor = 1e-3;

struct RelevanceMap {
  Image image;
  double lower = 0;  // smallest score shown
  double upper = 0;  // largest score shown
};

/// Tints each part by its score over a grayscale copy of `image`. The
/// colour scale is symmetric about zero. `map` must be at the report's
/// abstraction level. Throws PartMismatch.
RelevanceMap relevance_map(const Image& image, const SegmentationMap& map,
                           const ExplanationReport& report);
std::vector<std::uint8_t> render_relevance_map(const Image& image, const SegmentationMap& map,
                                               const ExplanationReport& report);

/// Same geometry with a white-to-purple scale over bootstrap stds.
/// Throws MissingErrors when the report has no errors.
RelevanceMap error_map(const Image& image, const SegmentationMap& map,
                       const ExplanationReport& report);
std::vector<std::uint8_t> render_error_map(const Image& image, const SegmentationMap& map,
                                           const ExplanationReport& report);

// ---------------------------------------------------------------------------
// Global aggregation

struct PartAggregate {
  std::string name;
  std::optional<double> mean;  // absent when count == 0
  std::size_t count = 0;
};

/// Per-part mean over the reports in which the part is active. Every name
/// of `vocabulary` is reported. Throws MixedAbstraction, EmptyInput.
std::vector<PartAggregate> aggregate_global(const std::vector<ExplanationReport>& reports,
                                            const std::vector<std::string>& vocabulary);
std::string aggregate_json(const std::vector<PartAggregate>& aggregates, int level);

/// Human pictogram for level 1..3 with regions coloured by mean score.
/// Throws UnsupportedLevel for level 0.
std::string render_pictogram(const std::vector<PartAggregate>& aggregates, int level);

// ---------------------------------------------------------------------------
// Sample-efficiency harness

enum class Band { Instances, Seeds };
Band parse_band(std::string_view name);

struct ConvergenceConfig {
  std::vector<Method> methods{Method::KernelShap, Method::BetaSampling};
  std::vector<MaskingKind> maskings{MaskingKind::Inpaint};
  std::vector<int> levels{1};
  std::vector<std::size_t> ladder;
  std::vector<std::uint64_t> seeds{0};
  Band band = Band::Instances;
  ExplainConfig base;  // beta params, bootstrap, matching, workers
};

/// 8, 16, ..., 4096.
std::vector<std::size_t> default_ladder();
/// Throws ConfigError unless strictly increasing powers of two.
void validate_ladder(const std::vector<std::size_t>& ladder);

struct ConvergenceRow {
  Method method = Method::KernelShap;
  MaskingKind masking = MaskingKind::Inpaint;
  int level = 0;
  std::size_t n_samples = 0;
  std::uint8_t part_id = 0;
  std::string part_name;
  double mean_score = 0;
  double std = 0;

  friend bool operator==(const ConvergenceRow&, const ConvergenceRow&) = default;
};

/// A (method, masking, level, n) cell whose budget is too small for the solver.
struct SkippedCell {
  Method method = Method::KernelShap;
  MaskingKind masking = MaskingKind::Inpaint;
  int level = 0;
  std::size_t n_samples = 0;
  std::string reason;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // sorted by (method, masking, level, n, part id)
  std::vector<SkippedCell> skipped;
};

/// Explains every instance at every budget for every seed. `mean_score` is
/// the mean over instances and seeds; `std` is the across-instance std
/// averaged over seeds (Band::Instances) or the across-seed std averaged
/// over instances (Band::Seeds). Cells where any instance is Underdetermined
/// produce no rows and are listed in `skipped`.
ConvergenceTable run_convergence(const std::vector<Instance>& instances,
                                 const DetectorFactory& detector, const ConvergenceConfig& config);

std::string convergence_csv(const ConvergenceTable& table);
ConvergenceTable parse_convergence_csv(const std::string& text);

/// Mean over parts of the std band per (method, n), plus whether the Beta
/// bands are non-increasing in n.
std::string convergence_summary_json(const ConvergenceTable& table);

}  // namespace spx
