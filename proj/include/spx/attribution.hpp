#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "spx/error.hpp"
#include "spx/linalg.hpp"

namespace spx {

enum class Method { KernelShap, BetaSampling, ExactOracle };

std::string_view method_name(Method m) noexcept;  // kernelshap | beta | exact
Method parse_method(std::string_view name);

// ---------------------------------------------------------------------------
// Shapley kernel

struct Rational {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// (M-1) / (C(M,s) s (M-s)) in lowest terms. Throws DegenerateCoalition for
/// s in {0, M}; ConfigError if the value does not fit 64-bit terms.
Rational shapley_kernel_weight_exact(int parts, int size);

/// Shapley kernel weight for a coalition of `size` present parts out of `parts`.
template <typename Scalar = double>
Scalar shapley_kernel_weight(int parts, int size) {
  if (parts < 2 || size <= 0 || size >= parts) {
    fail(ErrorCode::DegenerateCoalition,
         "coalition size " + std::to_string(size) + " of " + std::to_string(parts) +
             " has infinite kernel weight");
  }
  // C(M, s) built incrementally; exact in double for the sizes we enumerate.
  Scalar binom = 1;
  const int k = std::min(size, parts - size);
  for (int i = 1; i <= k; ++i) binom = binom * Scalar(parts - k + i) / Scalar(i);
  return Scalar(parts - 1) / (binom * Scalar(size) * Scalar(parts - size));
}

// ---------------------------------------------------------------------------
// Samples

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

/// One row per perturbation: presence values, regression weight (infinite
/// for the empty and full coalitions) and the resulting detection quality.
struct SampleSet {
  Eigen::MatrixXd presence;  // n x M
  Eigen::VectorXd weights;   // n
  Eigen::VectorXd quality;   // n

  Eigen::Index size() const noexcept { return presence.rows(); }
  Eigen::Index parts() const noexcept { return presence.cols(); }
  SampleSet subset(std::span<const std::size_t> rows) const;
};

struct CoalitionDesign {
  Eigen::MatrixXd presence;  // rows in {0,1}^M
  Eigen::VectorXd weights;
  bool exact = false;  // every coalition enumerated once
};

/// Shapley-kernel coalition sampling. Enumerates all 2^M coalitions when
/// that fits the budget; otherwise the empty and full coalitions plus
/// budget-2 draws (size by kernel mass, then a uniform subset).
CoalitionDesign sample_coalitions(int parts, std::size_t budget, std::uint64_t seed);

struct BetaParams {
  double alpha = 0.2;
  double beta = 0.1;

  double mean() const noexcept { return alpha / (alpha + beta); }
};

/// n x M matrix of i.i.d. Beta(alpha, beta) presence values.
Eigen::MatrixXd sample_beta(int parts, std::size_t count, const BetaParams& params,
                            std::uint64_t seed);

// ---------------------------------------------------------------------------
// Solvers

struct ExplanationResult {
  Eigen::VectorXd scores;
  double intercept = 0;
  std::optional<Eigen::VectorXd> errors;
  Method method = Method::KernelShap;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  bool regularized = false;
};

/// Shapley-kernel weighted regression with the intercept pinned to
/// `q_empty` and the scores summing to `q_full - q_empty`.
ExplanationResult solve_kernelshap(const SampleSet& samples, double q_full, double q_empty);

/// Ordinary least squares of quality on presence with a free intercept.
ExplanationResult solve_beta(const SampleSet& samples);

struct BootstrapConfig {
  int rounds = 4;
  double fraction = 0.75;
};

/// Repeats the solver on random subsets and reports per-part mean and
/// population std. `q_full`/`q_empty` are only used by KernelSHAP.
ExplanationResult bootstrap_errors(const SampleSet& samples, Method solver, std::uint64_t seed,
                                   const BootstrapConfig& config = {}, double q_full = 0,
                                   double q_empty = 0);

inline constexpr int kMaxOracleParts = 20;

/// Value of a coalition; receives a binary presence vector.
using ValueFunction = std::function<double(std::span<const double>)>;

/// Shapley values by full enumeration of the 2^M coalitions.
Eigen::VectorXd exact_shapley(int parts, const ValueFunction& value);

}  // namespace spx
