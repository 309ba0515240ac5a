#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "gpdqc/datasets.h"
#include "gpdqc/distributions.h"
#include "gpdqc/pot.h"
#include "gpdqc/prior.h"
#include "gpdqc/rng.h"
#include "test_util.h"

using namespace gpdqc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChainOutput chain_of(std::vector<double> alphas, std::vector<double> betas) {
  ChainOutput c;
  c.alphas = std::move(alphas);
  c.betas = std::move(betas);
  c.accepted.assign(c.alphas.size(), 1);
  c.acceptance_rate = 1.0;
  return c;
}

ExcessSample fire_sample() {
  const Dataset ds = builtin_dataset("fire");
  ExcessSample s = excesses_over_threshold(ds.values, *ds.threshold);
  s.years = ds.years;
  return s;
}

}  // namespace

TEST_CASE("POT quantile") {
  const QuantileRequest req{0.01, 170, 17, 22.0};
  CHECK(std::abs(pot_quantile(2, 10, req) - (22 + 10 * (std::sqrt(10.0) - 1))) < 1e-12);
  CHECK(pot_quantile(2, 10, req) == doctest::Approx(43.6228).epsilon(1e-6));
  CHECK(pot_quantile(2, 10, {17.0 / 170, 170, 17, 22.0}) == 22.0);
  CHECK(pot_quantile(0.7, 3, {0.3, 10, 3, 5.0}) == 5.0);
  CHECK_ERROR(pot_quantile(2, 10, {0.2, 170, 17, 22.0}), kDomain);
  CHECK_ERROR(pot_quantile(0, 10, req), kDomain);

  double prev = kInf;
  for (double p = 1e-6; p < 0.1; p *= 1.5) {
    const double q = pot_quantile(1.3, 4, {p, 170, 17, 22.0});
    CHECK(q < prev);
    CHECK(q > 22.0);
    prev = q;
  }
}

TEST_CASE("POT quantile from a point fit") {
  TailFit fit;
  fit.gamma = 0.5;
  fit.sigma = 5;
  fit.converged = true;
  const QuantileRequest req{0.01, 170, 17, 22.0};
  CHECK(pot_quantile(fit, req) == doctest::Approx(pot_quantile(2, 10, req)).epsilon(1e-14));
  fit.gamma = 0;
  fit.sigma = 2;
  CHECK(pot_quantile(fit, req) == doctest::Approx(22 + 2 * std::log(10.0)).epsilon(1e-14));
  fit.gamma = -0.25;
  CHECK(pot_quantile(fit, req) ==
        doctest::Approx(22 + 2 * (std::pow(0.1, 0.25) - 1) / -0.25).epsilon(1e-14));
  fit.converged = false;
  CHECK_ERROR(pot_quantile(fit, req), kDomain);
}

TEST_CASE("posterior quantile draws") {
  const QuantileRequest req{0.01, 170, 17, 22.0};
  const auto one = posterior_quantile_draws(chain_of({2}, {10}), req);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == pot_quantile(2, 10, req));
  const auto same = posterior_quantile_draws(chain_of({1.5, 1.5, 1.5}, {3, 3, 3}), req);
  CHECK(same[0] == same[1]);
  CHECK(same[1] == same[2]);
  CHECK_ERROR(posterior_quantile_draws(ChainOutput{}, req), kValidation);
  try {
    posterior_quantile_draws(chain_of({1, 2}, {1, 1}), {0.5, 170, 17, 22.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::kDomain);
    CHECK(std::string(e.what()).find("draw 0") != std::string::npos);
  }

  RngStream rng(11);
  std::vector<double> x(500);
  const auto gpd = GpdParams::from_alpha_beta(1, 1);
  for (double& v : x) v = gpd_sample(gpd, rng);
  const ExcessSample s = extract_excesses(x, 499);
  ChainConfig cfg;
  cfg.hyper = empirical_hyperparameters(s);
  const auto chain = run_chain(s, cfg);
  const auto q = summarize(posterior_quantile_draws(chain, quantile_request(s, 1.0 / 5000)), 0.9);
  CHECK(std::isfinite(q.median));
  CHECK(q.median > s.threshold);
}

TEST_CASE("summarize") {
  std::vector<double> d(100);
  std::iota(d.begin(), d.end(), 1.0);
  auto s = summarize(d, 0.9);
  CHECK(s.ci_lo == doctest::Approx(5.95).epsilon(1e-14));
  CHECK(s.ci_hi == doctest::Approx(95.05).epsilon(1e-14));
  CHECK(s.median == doctest::Approx(50.5).epsilon(1e-14));
  CHECK(s.mean == doctest::Approx(50.5).epsilon(1e-14));
  CHECK(s.level == 0.9);

  const auto c = summarize(std::vector<double>(20, 3.25), 0.9);
  CHECK(c.ci_lo == 3.25);
  CHECK(c.ci_hi == 3.25);
  CHECK(c.median == 3.25);

  std::vector<double> r(500);
  std::iota(r.begin(), r.end(), 0.0);
  std::mt19937_64 gen(1);
  std::shuffle(r.begin(), r.end(), gen);
  s = summarize(r, 0.9);
  // Ranks 25 and 475 (1-based) with a 0.05 step of interpolation.
  CHECK(s.ci_lo == doctest::Approx(24.95).epsilon(1e-14));
  CHECK(s.ci_hi == doctest::Approx(474.05).epsilon(1e-14));
  for (int t = 0; t < 20; ++t) {
    std::shuffle(r.begin(), r.end(), gen);
    const auto p = summarize(r, 0.9);
    CHECK(p.ci_lo == s.ci_lo);
    CHECK(p.ci_hi == s.ci_hi);
    CHECK(p.median == s.median);
  }

  CHECK_ERROR(summarize(std::vector<double>(9, 1.0), 0.9), kValidation);
  CHECK_ERROR(summarize(d, 1.0), kValidation);
  CHECK_ERROR(summarize(d, 0.0), kValidation);

  std::vector<double> with_inf(d);
  for (int i = 0; i < 10; ++i) with_inf[i] = kInf;
  s = summarize(with_inf, 0.9);
  CHECK(std::isinf(s.ci_hi));
  CHECK(std::isfinite(s.median));
  CHECK(s.ci_lo <= s.median);
}

TEST_CASE("predictive quantile") {
  const auto single = chain_of({2}, {3});
  CHECK(predictive_quantile(single, 0.9) ==
        gpd_quantile(GpdParams::from_alpha_beta(2, 3), 0.9));
  CHECK(predictive_quantile(chain_of({2, 2}, {3, 3}), 0.9) ==
        doctest::Approx(gpd_quantile(GpdParams::from_alpha_beta(2, 3), 0.9)).epsilon(1e-15));

  // Against simulation from the mixture, at a probability where the
  // per-draw quantile functions are close.
  const auto mix = chain_of({3, 4, 5}, {2, 3, 4});
  RngStream rng(12);
  const int draws = 400000;
  std::vector<double> y(draws);
  for (double& v : y) {
    const auto m = static_cast<std::size_t>(3 * rng.uniform());
    v = gpd_sample(GpdParams::from_alpha_beta(mix.alphas[m], mix.betas[m]), rng);
  }
  std::sort(y.begin(), y.end());
  const double simulated = empirical_quantile(y, 0.5);
  const double predicted = predictive_quantile(mix, 0.5);
  CHECK(std::abs(simulated - predicted) / predicted < 0.01);
  CHECK_ERROR(predictive_quantile(ChainOutput{}, 0.5), kValidation);
}

TEST_CASE("return levels") {
  ExcessSample s;
  s.threshold = 10;
  s.excesses.assign(30, 1.0);
  s.n = 154;
  s.years = 35;
  CHECK(return_period_probability(s, 100) == doctest::Approx(35.0 / (100 * 154)).epsilon(1e-15));
  CHECK(return_period_probability(s, 100) == doctest::Approx(2.27e-3).epsilon(2e-3));
  const double n_threshold = 35.0 / 30.0;
  const auto chain = chain_of({1.5, 2, 3, 2.5, 1.8, 2.2, 2.7, 1.9, 2.1, 2.4},
                              {3, 4, 5, 3.5, 2, 3.1, 4.4, 2.8, 3.3, 3.9});
  const auto at_u = return_level_draws(chain, n_threshold, s);
  for (double v : at_u) CHECK(v == doctest::Approx(10.0).epsilon(1e-14));

  double prev_median = 0, prev_hi = 0;
  for (double n_years : {10.0, 20.0, 40.0, 80.0, 160.0}) {
    CHECK(return_period_probability(s, 2 * n_years) ==
          doctest::Approx(return_period_probability(s, n_years) / 2).epsilon(1e-15));
    const auto rl = return_level(chain, n_years, s, 0.9);
    CHECK(rl.median >= prev_median);
    CHECK(rl.ci_hi >= prev_hi);
    prev_median = rl.median;
    prev_hi = rl.ci_hi;
  }
  CHECK_ERROR(return_level(chain, 0.5, s, 0.9), kDomain);
  s.years.reset();
  CHECK_ERROR(return_period_probability(s, 100), kValidation);
}

TEST_CASE("net premium") {
  auto s = fire_sample();
  TailFit fit;
  fit.gamma = 0.254;
  fit.sigma = 11.948;
  fit.converged = true;
  CHECK(net_premium(fit, s) == doctest::Approx(1.7 * 11.948 / 0.746).epsilon(1e-14));
  CHECK(std::abs(net_premium(fit, s) - 27.23) < 0.01);
  CHECK(std::abs(net_premium(ml_gpd_fit(s), s) - 27.23) < 0.05);

  ExcessSample e;
  e.threshold = 0;
  e.excesses = {1, 2, 3, 4};
  e.n = 10;
  e.years = 2;
  fit.gamma = 0;
  fit.sigma = 1;
  CHECK(net_premium(fit, e) == 2.0);
  fit.gamma = 1.0;
  CHECK(std::isinf(net_premium(fit, e)));

  // α = 0.5, 1 and 0.8 give γ = 2, 1, 1.25: infinite.
  std::vector<double> alphas = {0.5, 1, 0.8, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> betas(alphas.size(), 2.0);
  const auto chain = chain_of(alphas, betas);
  const auto draws = net_premium_draws(chain, e);
  for (std::size_t m = 0; m < draws.size(); ++m) {
    if (alphas[m] <= 1) {
      CHECK(std::isinf(draws[m]));
    } else {
      CHECK(draws[m] > 0);
      CHECK(draws[m] == doctest::Approx(2.0 * (2.0 / alphas[m]) / (1 - 1 / alphas[m])));
    }
  }
  const auto p = net_premium(chain, e, 0.9);
  CHECK(p.infinite_draws == 3);
  CHECK(p.infinite_fraction == doctest::Approx(0.25));
  CHECK(std::isinf(p.summary.ci_hi));
  CHECK(std::isfinite(p.summary.median));
  CHECK(std::isfinite(p.summary.mean));
  CHECK(p.summary.ci_lo <= p.summary.median);

  const auto hopeless = chain_of(std::vector<double>(12, 0.9), std::vector<double>(12, 1.0));
  CHECK_ERROR(net_premium(hopeless, e, 0.9), kDegenerate);
  e.years.reset();
  CHECK_ERROR(net_premium_draws(chain, e), kValidation);
}
