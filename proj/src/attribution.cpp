#include "spx/attribution.hpp"

#include <cmath>
#include <numeric>

#include "spx/random.hpp"

namespace spx {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::KernelShap: return "kernelshap";
    case Method::BetaSampling: return "beta";
    case Method::ExactOracle: return "exact";
  }
  return "kernelshap";
}

Method parse_method(std::string_view name) {
  if (name == "kernelshap") return Method::KernelShap;
  if (name == "beta") return Method::BetaSampling;
  if (name == "exact") return Method::ExactOracle;
  fail(ErrorCode::ConfigError, "unknown method '" + std::string(name) + "'");
}

Rational shapley_kernel_weight_exact(int parts, int size) {
  if (parts < 2 || size <= 0 || size >= parts) {
    fail(ErrorCode::DegenerateCoalition, "empty and full coalitions have infinite weight");
  }
  using u128 = unsigned __int128;
  u128 binom = 1;
  for (int i = 1; i <= size; ++i) {
    binom = binom * static_cast<u128>(parts - size + i) / static_cast<u128>(i);
  }
  u128 num = static_cast<u128>(parts - 1);
  u128 den = binom * static_cast<u128>(size) * static_cast<u128>(parts - size);
  u128 a = num;
  u128 b = den;
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  num /= a;
  den /= a;
  if (den > std::numeric_limits<std::uint64_t>::max()) {
    fail(ErrorCode::ConfigError, "kernel weight denominator exceeds 64 bits");
  }
  return {static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

SampleSet SampleSet::subset(std::span<const std::size_t> rows) const {
  SampleSet out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.presence.resize(n, parts());
  out.weights.resize(n);
  out.quality.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
    out.presence.row(r) = presence.row(src);
    out.weights[r] = weights[src];
    out.quality[r] = quality[src];
  }
  return out;
}

CoalitionDesign sample_coalitions(int parts, std::size_t budget, std::uint64_t seed) {
  if (budget < 2) fail(ErrorCode::BudgetTooSmall, "coalition sampling needs a budget of at least 2");
  if (parts < 1) fail(ErrorCode::ConfigError, "coalition sampling needs at least one part");

  CoalitionDesign design;
  const bool enumerable = parts < 63 && (std::uint64_t{1} << parts) <= budget;
  if (enumerable) {
    const auto count = static_cast<Eigen::Index>(std::uint64_t{1} << parts);
    design.exact = true;
    design.presence.setZero(count, parts);
    design.weights.resize(count);
    for (Eigen::Index mask = 0; mask < count; ++mask) {
      int size = 0;
      for (int i = 0; i < parts; ++i) {
        if ((mask >> i) & 1) {
          design.presence(mask, i) = 1.0;
          ++size;
        }
      }
      design.weights[mask] = (size == 0 || size == parts)
                                 ? kInfiniteWeight
                                 : shapley_kernel_weight<double>(parts, size);
    }
    return design;
  }

  const auto n = static_cast<Eigen::Index>(budget);
  design.presence.setZero(n, parts);
  design.weights.resize(n);
  design.presence.row(1).setOnes();
  design.weights[0] = kInfiniteWeight;
  design.weights[1] = kInfiniteWeight;

  // Total kernel mass of each size: C(M,s) * weight(M,s) = (M-1) / (s (M-s)).
  std::vector<double> cumulative;
  double total = 0;
  for (int s = 1; s < parts; ++s) {
    total += static_cast<double>(parts - 1) / (static_cast<double>(s) * (parts - s));
    cumulative.push_back(total);
  }
  // Drawing proportional to the kernel makes every draw carry the same
  // importance weight, the kernel's normalising constant.
  Rng rng(derive_seed(seed, {kStreamSampling}));
  for (Eigen::Index r = 2; r < n; ++r) {
    const double u = uniform01(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const int size = 1 + static_cast<int>(std::min<std::ptrdiff_t>(
                             it - cumulative.begin(), static_cast<std::ptrdiff_t>(parts - 2)));
    for (const auto i : sample_without_replacement(rng, static_cast<std::size_t>(parts),
                                                   static_cast<std::size_t>(size))) {
      design.presence(r, static_cast<Eigen::Index>(i)) = 1.0;
    }
    design.weights[r] = total;
  }
  return design;
}

namespace {

/// log of a Gamma(shape, 1) variate, stable for shape < 1.
double log_gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> g(shape, 1.0);
    return std::log(g(rng));
  }
  std::gamma_distribution<double> g(shape + 1.0, 1.0);
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return std::log(g(rng)) + std::log(u) / shape;
}

}  // namespace

Eigen::MatrixXd sample_beta(int parts, std::size_t count, const BetaParams& params,
                            std::uint64_t seed) {
  if (!(params.alpha > 0) || !(params.beta > 0)) {
    fail(ErrorCode::ConfigError, "beta concentration coefficients must be positive");
  }
  if (count < 1) fail(ErrorCode::BudgetTooSmall, "beta sampling needs at least one sample");
  Rng rng(derive_seed(seed, {kStreamSampling}));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), parts);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      const double lx = log_gamma_variate(rng, params.alpha);
      const double ly = log_gamma_variate(rng, params.beta);
      // X / (X + Y) evaluated in log space.
      out(r, c) = 1.0 / (1.0 + std::exp(ly - lx));
    }
  }
  return out;
}

ExplanationResult solve_kernelshap(const SampleSet& samples, double q_full, double q_empty) {
  const auto parts = samples.parts();
  if (parts < 1) fail(ErrorCode::Underdetermined, "no parts to attribute");

  ExplanationResult result;
  result.method = Method::KernelShap;
  result.n_samples = static_cast<std::size_t>(samples.size());
  result.intercept = q_empty;
  const double delta = q_full - q_empty;

  if (parts == 1) {
    result.scores = Eigen::VectorXd::Constant(1, delta);
    return result;
  }

  std::vector<Eigen::Index> rows;
  for (Eigen::Index r = 0; r < samples.size(); ++r) {
    if (std::isfinite(samples.weights[r])) rows.push_back(r);
  }
  if (rows.empty()) {
    fail(ErrorCode::Underdetermined, "no finite-weight coalitions to regress on");
  }

  // Eliminate the last score via the sum constraint.
  const auto free = parts - 1;
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd design(n, free);
  Eigen::VectorXd target(n);
  Eigen::VectorXd weights(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto r = rows[static_cast<std::size_t>(k)];
    const double last = samples.presence(r, free);
    design.row(k) = samples.presence.row(r).head(free).array() - last;
    target[k] = samples.quality[r] - q_empty - last * delta;
    weights[k] = samples.weights[r];
  }

  const auto sol = weighted_least_squares<double>(design, target, weights);
  result.scores.resize(parts);
  result.scores.head(free) = sol.coefficients;
  result.scores[free] = delta - sol.coefficients.sum();
  result.regularized = sol.regularized;
  return result;
}

ExplanationResult solve_beta(const SampleSet& samples) {
  const auto parts = samples.parts();
  if (samples.size() < parts + 1) {
    fail(ErrorCode::Underdetermined, "beta regression needs at least " +
                                         std::to_string(parts + 1) + " samples, got " +
                                         std::to_string(samples.size()));
  }
  Eigen::MatrixXd design(samples.size(), parts + 1);
  design.col(0).setOnes();
  design.rightCols(parts) = samples.presence;
  const auto sol = ordinary_least_squares<double>(design, samples.quality);

  ExplanationResult result;
  result.method = Method::BetaSampling;
  result.n_samples = static_cast<std::size_t>(samples.size());
  result.intercept = sol.coefficients[0];
  result.scores = sol.coefficients.tail(parts);
  result.regularized = sol.regularized;
  return result;
}

ExplanationResult bootstrap_errors(const SampleSet& samples, Method solver, std::uint64_t seed,
                                   const BootstrapConfig& config, double q_full,
                                   double q_empty) {
  if (config.rounds < 1 || !(config.fraction > 0.0 && config.fraction <= 1.0)) {
    fail(ErrorCode::ConfigError, "bootstrap needs rounds >= 1 and fraction in (0, 1]");
  }
  const auto n = static_cast<std::size_t>(samples.size());
  const auto parts = static_cast<std::size_t>(samples.parts());
  const auto take = static_cast<std::size_t>(std::floor(config.fraction * static_cast<double>(n)));
  if (take < parts + 1) {
    fail(ErrorCode::Underdetermined,
         "bootstrap subsets of " + std::to_string(take) + " samples cannot fit " +
             std::to_string(parts) + " parts");
  }

  Rng rng(derive_seed(seed, {kStreamBootstrap}));
  Eigen::MatrixXd fits(static_cast<Eigen::Index>(parts), config.rounds);
  Eigen::VectorXd intercepts(config.rounds);
  bool regularized = false;
  for (int k = 0; k < config.rounds; ++k) {
    const auto rows = sample_without_replacement(rng, n, take);
    const auto sub = samples.subset(rows);
    const auto fit = solver == Method::BetaSampling ? solve_beta(sub)
                                                    : solve_kernelshap(sub, q_full, q_empty);
    fits.col(k) = fit.scores;
    intercepts[k] = fit.intercept;
    regularized = regularized || fit.regularized;
  }

  ExplanationResult result;
  result.method = solver;
  result.n_samples = n;
  result.seed = seed;
  result.regularized = regularized;
  result.scores = fits.rowwise().mean();
  result.intercept = intercepts.mean();
  const Eigen::MatrixXd centred = fits.colwise() - result.scores;
  result.errors = (centred.array().square().rowwise().sum() / config.rounds).sqrt().matrix();
  return result;
}

Eigen::VectorXd exact_shapley(int parts, const ValueFunction& value) {
  if (parts > kMaxOracleParts) {
    fail(ErrorCode::TooManyParts, "exact Shapley values limited to " +
                                      std::to_string(kMaxOracleParts) + " parts, got " +
                                      std::to_string(parts));
  }
  if (parts < 1) return Eigen::VectorXd(0);

  const std::size_t count = std::size_t{1} << parts;
  std::vector<double> values(count);
  std::vector<double> presence(static_cast<std::size_t>(parts));
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < parts; ++i) presence[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    values[mask] = value(presence);
  }

  // |S|! (M-|S|-1)! / M! = 1 / (M * C(M-1, |S|))
  std::vector<double> weight(static_cast<std::size_t>(parts));
  double binom = 1;
  for (int s = 0; s < parts; ++s) {
    weight[static_cast<std::size_t>(s)] = 1.0 / (static_cast<double>(parts) * binom);
    binom = binom * (parts - 1 - s) / (s + 1);
  }

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(parts);
  for (std::size_t mask = 0; mask < count; ++mask) {
    const int size = std::popcount(mask);
    for (int i = 0; i < parts; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (mask & bit) continue;
      phi[i] += weight[static_cast<std::size_t>(size)] * (values[mask | bit] - values[mask]);
    }
  }
  return phi;
}

}  // namespace spx
