#include <doctest.h>

#include <bit>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "spx/attribution.hpp"
#include "spx/detector.hpp"
#include "spx/error.hpp"
#include "spx/fixtures.hpp"

using namespace spx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an spx::Error");
  return ErrorCode::ConfigError;
}

std::vector<double> random_game(int m, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  std::vector<double> coef(std::size_t{1} << m);
  for (auto& c : coef) c = n(rng);
  return coef;
}

oracle::Game linear_game(std::vector<double> w, double b) {
  return [w = std::move(w), b](std::span<const double> z) {
    double v = b;
    for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * z[i];
    return v;
  };
}

double endpoint(const oracle::Game& v, int m, double value) {
  const std::vector<double> z(static_cast<std::size_t>(m), value);
  return v(z);
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("kernelshap") == Method::KernelShap);
  CHECK(parse_method("beta") == Method::BetaSampling);
  CHECK(method_name(Method::ExactOracle) == "exact");
  CHECK(code_of([] { parse_method("lime"); }) == ErrorCode::ConfigError);
}

TEST_CASE("shapley kernel weight") {
  CHECK(shapley_kernel_weight(4, 1) == doctest::Approx(0.25));
  CHECK(shapley_kernel_weight(6, 2) == doctest::Approx(1.0 / 24.0));
  CHECK(shapley_kernel_weight_exact(4, 1) == Rational{1, 4});
  CHECK(shapley_kernel_weight_exact(6, 2) == Rational{1, 24});
  CHECK(code_of([] { shapley_kernel_weight(5, 0); }) == ErrorCode::DegenerateCoalition);
  CHECK(code_of([] { shapley_kernel_weight(5, 5); }) == ErrorCode::DegenerateCoalition);
  CHECK(code_of([] { shapley_kernel_weight_exact(5, 0); }) == ErrorCode::DegenerateCoalition);

  for (int m = 2; m <= 12; ++m) {
    for (int s = 1; s < m; ++s) {
      const auto [num, den] = oracle::kernel_rational(m, s);
      const auto exact = shapley_kernel_weight_exact(m, s);
      CHECK(exact.numerator == num);
      CHECK(exact.denominator == den);
      const double w = shapley_kernel_weight(m, s);
      CHECK(w > 0.0);
      CHECK(w == doctest::Approx(double(num) / double(den)).epsilon(1e-15));
      CHECK(w == shapley_kernel_weight(m, m - s));
      CHECK(shapley_kernel_weight<long double>(m, s) ==
            doctest::Approx(double(num) / double(den)).epsilon(1e-15));
    }
  }
}

TEST_CASE("sample_coalitions") {
  SUBCASE("exact mode enumerates every coalition once") {
    const auto d = sample_coalitions(6, 64, 1);
    CHECK(d.exact);
    REQUIRE(d.presence.rows() == 64);
    std::set<unsigned> masks;
    for (Eigen::Index r = 0; r < 64; ++r) {
      unsigned mask = 0;
      for (Eigen::Index c = 0; c < 6; ++c) {
        const double v = d.presence(r, c);
        CHECK((v == 0.0 || v == 1.0));
        if (v == 1.0) mask |= 1U << c;
      }
      masks.insert(mask);
      const int s = std::popcount(mask);
      if (s == 0 || s == 6) {
        CHECK(std::isinf(d.weights(r)));
      } else {
        CHECK(d.weights(r) == doctest::Approx(shapley_kernel_weight(6, s)));
      }
    }
    CHECK(masks.size() == 64);
  }
  SUBCASE("sampled mode") {
    const auto a = sample_coalitions(14, 8, 99);
    const auto b = sample_coalitions(14, 8, 99);
    const auto c = sample_coalitions(14, 8, 100);
    CHECK_FALSE(a.exact);
    REQUIRE(a.presence.rows() == 8);
    CHECK(a.presence == b.presence);
    CHECK(a.weights == b.weights);
    CHECK(a.presence != c.presence);
    int zeros = 0, ones = 0;
    for (Eigen::Index r = 0; r < 8; ++r) {
      const double s = a.presence.row(r).sum();
      if (s == 0) ++zeros;
      if (s == 14) ++ones;
      CHECK(std::isinf(a.weights(r)) == (s == 0 || s == 14));
      CHECK(((a.presence.row(r).array() == 0) || (a.presence.row(r).array() == 1)).all());
    }
    CHECK(zeros == 1);
    CHECK(ones == 1);
  }
  SUBCASE("sizes follow the normalised kernel mass") {
    const int m = 14;
    const std::size_t budget = 16000;
    const auto d = sample_coalitions(m, budget, 5);
    std::map<int, double> counts;
    for (Eigen::Index r = 0; r < d.presence.rows(); ++r) {
      const int s = static_cast<int>(d.presence.row(r).sum());
      if (s != 0 && s != m) counts[s] += 1;
    }
    // Kernel mass of size s: C(M,s) * weight = (M-1) / (s (M-s)).
    double z = 0;
    for (int s = 1; s < m; ++s) z += double(m - 1) / (s * (m - s));
    const double draws = double(budget - 2);
    for (int s = 1; s < m; ++s) {
      const double p = double(m - 1) / (s * (m - s)) / z;
      const double sd = std::sqrt(draws * p * (1 - p));
      CHECK(std::abs(counts[s] - draws * p) < 5 * sd);
    }
  }
  SUBCASE("budget too small") {
    CHECK(code_of([] { sample_coalitions(4, 1, 0); }) == ErrorCode::BudgetTooSmall);
  }
}

TEST_CASE("exact shapley oracle") {
  SUBCASE("additive game") {
    const std::vector<double> w = {0.3, -0.1, 0.25, 0.05};
    const auto phi = exact_shapley(4, linear_game(w, 0.2));
    for (int i = 0; i < 4; ++i) CHECK(phi(i) == doctest::Approx(w[static_cast<std::size_t>(i)]));
  }
  SUBCASE("unanimity game on three players") {
    const auto phi = exact_shapley(3, [](std::span<const double> z) {
      return z[0] * z[1] * z[2];
    });
    for (int i = 0; i < 3; ++i) CHECK(phi(i) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("matches the permutation oracle and is efficient") {
    for (int m = 1; m <= 7; ++m) {
      const auto coef = random_game(m, static_cast<std::uint32_t>(m));
      const oracle::Game v = [&](std::span<const double> z) { return oracle::multilinear(coef, z); };
      const auto phi = exact_shapley(m, v);
      const auto ref = oracle::permutation_shapley(m, v);
      CHECK((phi - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int m = 8; m <= 10; ++m) {
      const auto coef = random_game(m, static_cast<std::uint32_t>(m));
      const oracle::Game v = [&](std::span<const double> z) { return oracle::multilinear(coef, z); };
      const auto phi = exact_shapley(m, v);
      CHECK(phi.sum() == doctest::Approx(endpoint(v, m, 1) - endpoint(v, m, 0)).epsilon(1e-12));
    }
  }
  SUBCASE("too many parts") {
    CHECK(code_of([] { exact_shapley(21, [](std::span<const double>) { return 0.0; }); }) ==
          ErrorCode::TooManyParts);
  }
}

TEST_CASE("kernelshap solver") {
  SUBCASE("linear recovery in exact mode") {
    const std::vector<double> w = {0.05, 0.1, 0.15, 0.2, 0.1, 0.1};
    const auto v = linear_game(w, 0.1);
    const auto samples = oracle::score_design(sample_coalitions(6, 64, 0), v);
    const auto r = solve_kernelshap(samples, endpoint(v, 6, 1), endpoint(v, 6, 0));
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(r.scores(i) - w[static_cast<std::size_t>(i)]) <= 1e-9);
    }
    CHECK(r.intercept == doctest::Approx(0.1));
    CHECK_FALSE(r.errors.has_value());
    CHECK(r.method == Method::KernelShap);
  }
  SUBCASE("product of two splits evenly") {
    const oracle::Game v = [](std::span<const double> z) { return z[0] * z[1]; };
    const auto samples = oracle::score_design(sample_coalitions(2, 4, 0), v);
    const auto r = solve_kernelshap(samples, 1.0, 0.0);
    CHECK(r.scores(0) == doctest::Approx(0.5));
    CHECK(r.scores(1) == doctest::Approx(0.5));
  }
  SUBCASE("constant game") {
    const oracle::Game v = [](std::span<const double>) { return 0.42; };
    const auto samples = oracle::score_design(sample_coalitions(5, 32, 0), v);
    const auto r = solve_kernelshap(samples, 0.42, 0.42);
    CHECK(r.scores.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.intercept == 0.42);
  }
  SUBCASE("exact mode equals the oracle for random games") {
    for (int m = 2; m <= 10; ++m) {
      const auto coef = random_game(m, 100U + static_cast<std::uint32_t>(m));
      const oracle::Game v = [&](std::span<const double> z) { return oracle::multilinear(coef, z); };
      const auto design = sample_coalitions(m, std::size_t{1} << m, 0);
      REQUIRE(design.exact);
      const auto r = solve_kernelshap(oracle::score_design(design, v), endpoint(v, m, 1),
                                      endpoint(v, m, 0));
      const auto ref = exact_shapley(m, v);
      CHECK((r.scores - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("efficiency holds on sampled designs") {
    const auto form = fixtures::interaction_form();
    const oracle::Game v = [&](std::span<const double> z) { return synthetic_value(form, z); };
    for (const std::size_t n : {8U, 16U, 64U, 512U}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto samples = oracle::score_design(sample_coalitions(14, n, seed), v);
        const double f1 = endpoint(v, 14, 1), f0 = endpoint(v, 14, 0);
        const auto r = solve_kernelshap(samples, f1, f0);
        CHECK(r.intercept == f0);
        CHECK(std::abs(r.scores.sum() - (f1 - f0)) <= 1e-9);
      }
    }
  }
  SUBCASE("single part") {
    const oracle::Game v = [](std::span<const double> z) { return 0.2 + 0.5 * z[0]; };
    const auto r = solve_kernelshap(oracle::score_design(sample_coalitions(1, 2, 0), v), 0.7, 0.2);
    REQUIRE(r.scores.size() == 1);
    CHECK(r.scores(0) == doctest::Approx(0.5));
  }
  SUBCASE("tiny budgets fall back to the ridge") {
    const auto form = fixtures::interaction_form();
    const oracle::Game v = [&](std::span<const double> z) { return synthetic_value(form, z); };
    const auto r = solve_kernelshap(oracle::score_design(sample_coalitions(14, 8, 3), v),
                                    endpoint(v, 14, 1), endpoint(v, 14, 0));
    CHECK(r.regularized);
    CHECK(r.scores.allFinite());
  }
  SUBCASE("no finite rows") {
    const auto d = sample_coalitions(4, 2, 0);
    const auto samples = oracle::score_design(d, [](std::span<const double>) { return 0.0; });
    CHECK(code_of([&] { solve_kernelshap(samples, 0.0, 0.0); }) == ErrorCode::Underdetermined);
  }
}

TEST_CASE("sampled kernelshap converges to the oracle") {
  const auto form = fixtures::interaction_form();
  const oracle::Game v = [&](std::span<const double> z) { return synthetic_value(form, z); };
  const auto ref = exact_shapley(14, v);
  const double f1 = endpoint(v, 14, 1), f0 = endpoint(v, 14, 0);
  double previous = std::numeric_limits<double>::infinity();
  for (const std::size_t n : {64U, 256U, 1024U, 4096U}) {
    double err = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto r = solve_kernelshap(oracle::score_design(sample_coalitions(14, n, seed), v), f1, f0);
      err += (r.scores - ref).cwiseAbs().mean();
    }
    err /= 20;
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("beta sampling") {
  SUBCASE("mean of the default concentration") {
    const auto x = sample_beta(10, 10000, {}, 17);
    CHECK(std::abs(x.mean() - 2.0 / 3.0) <= 0.005);
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() <= 1.0);
    // Var = ab / ((a+b)^2 (a+b+1)).
    const double var = 0.2 * 0.1 / (0.09 * 1.3);
    const double emp = (x.array() - x.mean()).square().mean();
    CHECK(emp == doctest::Approx(var).epsilon(0.02));
  }
  SUBCASE("symmetric shapes have mean one half") {
    CHECK(std::abs(sample_beta(1, 100000, {0.5, 0.5}, 3).mean() - 0.5) <= 0.01);
    CHECK(std::abs(sample_beta(1, 100000, {2.0, 2.0}, 3).mean() - 0.5) <= 0.01);
  }
  SUBCASE("deterministic per seed") {
    CHECK(sample_beta(5, 100, {}, 9) == sample_beta(5, 100, {}, 9));
    CHECK(sample_beta(5, 100, {}, 9) != sample_beta(5, 100, {}, 10));
  }
  SUBCASE("invalid shapes") {
    CHECK(code_of([] { sample_beta(2, 4, {0.0, 1.0}, 0); }) == ErrorCode::ConfigError);
  }
}

TEST_CASE("beta solver") {
  SUBCASE("exact linear recovery") {
    const auto v = linear_game({0.4, 0.2}, 0.1);
    for (const auto params : {BetaParams{}, BetaParams{1, 1}, BetaParams{3, 0.5}}) {
      const auto samples = oracle::score_presence(sample_beta(2, 50, params, 1), v);
      const auto r = solve_beta(samples);
      CHECK(r.scores(0) == doctest::Approx(0.4).epsilon(1e-10));
      CHECK(r.scores(1) == doctest::Approx(0.2).epsilon(1e-10));
      CHECK(r.intercept == doctest::Approx(0.1).epsilon(1e-10));
      const Eigen::VectorXd fit =
          (samples.presence * r.scores).array() + r.intercept;
      CHECK((fit - samples.quality).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("constant quality") {
    const auto samples = oracle::score_presence(sample_beta(3, 40, {}, 2),
                                                [](std::span<const double>) { return 0.3; });
    CHECK(solve_beta(samples).scores.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("symmetric product") {
    const auto samples = oracle::score_presence(
        sample_beta(2, 2048, {}, 4), [](std::span<const double> z) { return z[0] * z[1]; });
    const auto r = solve_beta(samples);
    CHECK(std::abs(r.scores(0) - r.scores(1)) <= 0.05);
  }
  SUBCASE("too few samples") {
    const auto samples = oracle::score_presence(sample_beta(3, 3, {}, 2),
                                                [](std::span<const double>) { return 0.3; });
    CHECK(code_of([&] { solve_beta(samples); }) == ErrorCode::Underdetermined);
  }
}

TEST_CASE("bootstrap errors") {
  SUBCASE("linear quality has zero spread") {
    const auto samples =
        oracle::score_presence(sample_beta(4, 64, {}, 7), linear_game({0.1, 0.2, 0.3, 0.05}, 0.1));
    const auto r = bootstrap_errors(samples, Method::BetaSampling, 11);
    REQUIRE(r.errors.has_value());
    CHECK(r.errors->maxCoeff() <= 1e-9);
    CHECK(r.scores(2) == doctest::Approx(0.3));
  }
  SUBCASE("deterministic per seed") {
    const auto samples = oracle::score_presence(
        sample_beta(3, 40, {}, 7), [](std::span<const double> z) { return z[0] * z[1] + 0.1 * z[2]; });
    const auto a = bootstrap_errors(samples, Method::BetaSampling, 5);
    const auto b = bootstrap_errors(samples, Method::BetaSampling, 5);
    CHECK(a.scores == b.scores);
    CHECK(*a.errors == *b.errors);
  }
  SUBCASE("non-linear quality has positive spread") {
    const auto samples = oracle::score_presence(
        sample_beta(3, 40, {}, 8), [](std::span<const double> z) { return z[0] * z[1] + 0.1 * z[2]; });
    const BootstrapConfig cfg{4, 0.75};
    const auto r = bootstrap_errors(samples, Method::BetaSampling, 21, cfg);
    CHECK(r.errors->minCoeff() > 0.0);
    CHECK(r.n_samples == 40u);
  }
  SUBCASE("noisy linear quality") {
    const std::vector<double> w = {0.3, 0.1, 0.2};
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto samples = oracle::score_presence(sample_beta(3, 400, {}, 3), linear_game(w, 0.1));
    for (Eigen::Index i = 0; i < samples.quality.size(); ++i) samples.quality(i) += noise(rng);
    const auto r = bootstrap_errors(samples, Method::BetaSampling, 4);
    for (int i = 0; i < 3; ++i) {
      CHECK((*r.errors)(i) > 0.0);
      // Four-fit std understates sampling error; combine with the full-fit
      // residual scale before applying the 3-sigma bound.
      const double full_se = 0.01 / std::sqrt(400.0 * 0.2);
      const double combined = std::hypot((*r.errors)(i), full_se);
      CHECK(std::abs(r.scores(i) - w[static_cast<std::size_t>(i)]) <= 3 * combined);
    }
  }
  SUBCASE("kernelshap bootstrap keeps efficiency per round") {
    const auto form = fixtures::interaction_form();
    const oracle::Game v = [&](std::span<const double> z) { return synthetic_value(form, z); };
    const auto samples = oracle::score_design(sample_coalitions(14, 256, 1), v);
    const double f1 = endpoint(v, 14, 1), f0 = endpoint(v, 14, 0);
    const auto r = bootstrap_errors(samples, Method::KernelShap, 2, {}, f1, f0);
    CHECK(std::abs(r.scores.sum() - (f1 - f0)) <= 1e-9);
    CHECK(r.errors.has_value());
  }
  SUBCASE("too few samples") {
    const auto samples = oracle::score_presence(sample_beta(3, 5, {}, 1), linear_game({1, 1, 1}, 0));
    CHECK(code_of([&] { bootstrap_errors(samples, Method::BetaSampling, 1); }) ==
          ErrorCode::Underdetermined);
  }
}

TEST_CASE("dominant feature ranks first for both methods") {
  // q = 0.7 torso + 0.1 face over two parts.
  const auto v = linear_game({0.1, 0.7}, 0.0);
  int kernel_hits = 0, beta_hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ks = solve_kernelshap(oracle::score_design(sample_coalitions(2, 64, seed), v), 0.8, 0.0);
    if (ks.scores(1) > ks.scores(0)) ++kernel_hits;
    const auto bs = solve_beta(oracle::score_presence(sample_beta(2, 64, {}, seed), v));
    if (bs.scores(1) > bs.scores(0)) ++beta_hits;
  }
  CHECK(kernel_hits >= 19);
  CHECK(beta_hits >= 19);
}
