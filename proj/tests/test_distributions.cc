#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "gpdqc/distributions.h"
#include "gpdqc/estimators.h"
#include "gpdqc/rng.h"
#include "oracles.h"
#include "test_util.h"

using namespace gpdqc;

namespace {

const double kCGrid[] = {1.5, 2, 5, 10};
const double kDGrid[] = {1, 5, 50, 500};

}  // namespace

TEST_CASE("GpdParams conversions") {
  const auto p = GpdParams::from_alpha_beta(2.0, 3.0);
  CHECK(p.gamma() == 0.5);
  CHECK(p.sigma() == 1.5);
  CHECK(p.alpha() == 2.0);
  CHECK(p.beta() == 3.0);
  for (double a : {0.3, 1.0, 7.0}) {
    for (double b : {0.01, 1.0, 250.0}) {
      const auto q = GpdParams::from_alpha_beta(a, b);
      CHECK(q.alpha() == doctest::Approx(a).epsilon(1e-15));
      CHECK(q.beta() == doctest::Approx(b).epsilon(1e-15));
    }
  }
  CHECK_ERROR(GpdParams(0.0, 1.0).alpha(), kDomain);
  CHECK_ERROR(GpdParams(0.5, -1.0), kDomain);
  CHECK(GpdParams(-0.5, 2.0).upper_endpoint() == 4.0);
}

TEST_CASE("gpd_pdf examples") {
  CHECK(gpd_pdf(GpdParams::from_alpha_beta(1, 1), 0) == 1.0);
  CHECK(gpd_pdf(GpdParams(0.0, 2.0), 0) == 0.5);
  CHECK(gpd_pdf(GpdParams::from_alpha_beta(2, 3), 3) == doctest::Approx(1.0 / 12).epsilon(1e-15));
  CHECK(gpd_pdf(GpdParams(-0.5, 1.0), 1.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_ERROR(gpd_pdf(GpdParams(0.5, 1.0), -1.0), kDomain);
  CHECK_ERROR(gpd_pdf(GpdParams(-0.5, 1.0), 3.0), kDomain);
}

TEST_CASE("gpd_cdf examples and clamping") {
  CHECK(gpd_cdf(GpdParams(1, 1), 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gpd_cdf(GpdParams(0.3, 2), 0) == 0.0);
  CHECK(gpd_cdf(GpdParams(0.5, 2), 2) == doctest::Approx(1 - std::pow(1.5, -2)).epsilon(1e-15));
  CHECK(gpd_cdf(GpdParams(0.5, 2), -1) == 0.0);
  CHECK(gpd_cdf(GpdParams(-0.5, 1), 5) == 1.0);
}

TEST_CASE("gpd_cdf is continuous in gamma at zero") {
  // F_γ(y) = F_0(y) - γ t² e^(-t)/2 + O(γ²) with t = y/σ.
  for (double y : {0.1, 1.0, 5.0, 20.0}) {
    const double t = y / 1.5;
    const double ref = gpd_cdf(GpdParams(0.0, 1.5), y);
    CHECK(ref == doctest::Approx(-std::expm1(-t)).epsilon(1e-15));
    for (double g : {1e-6, -1e-6, 1e-7, -1e-9}) {
      const double first_order = ref - g * t * t * std::exp(-t) / 2;
      CHECK(std::abs(gpd_cdf(GpdParams(g, 1.5), y) - first_order) <= 1e-8);
    }
    CHECK(std::abs(gpd_cdf(GpdParams(1e-9, 1.5), y) - ref) <= 1e-8);
  }
}

TEST_CASE("gpd_quantile examples and round trip") {
  CHECK(gpd_quantile(GpdParams(1, 1), 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gpd_quantile(GpdParams(0, 1), 1 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gpd_quantile(GpdParams(0.5, 2), 1 - std::pow(1.5, -2)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  for (double g : {-0.4, -0.1, 0.0, 1e-7, 0.2, 1.0, 3.0}) {
    for (double s : {0.5, 1.0, 30.0}) {
      for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999, 1 - 1e-7}) {
        const GpdParams params(g, s);
        CHECK(std::abs(gpd_cdf(params, gpd_quantile(params, p)) - p) <= 1e-10);
      }
    }
  }
  CHECK_ERROR(gpd_quantile(GpdParams(1, 1), 1.0), kDomain);
  CHECK_ERROR(gpd_quantile(GpdParams(1, 1), 0.0), kDomain);
}

TEST_CASE("gpd_sample: KS and mean") {
  RngStream rng(5);
  const GpdParams p(0.5, 2);
  std::vector<double> draws(100000);
  for (double& x : draws) x = gpd_sample(p, rng);
  CHECK(oracle::ks_statistic(draws, [&](double y) { return gpd_cdf(p, y); }) <
        oracle::ks_critical_1pct(draws.size()));

  const GpdParams q(0.25, 1);
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = gpd_sample(q, rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 4.0 / 3) < 3 * se);
}

TEST_CASE("gpd_log_likelihood sums log densities") {
  const GpdParams p(0.3, 2);
  const std::vector<double> y = {0.1, 1, 4};
  double sum = 0;
  for (double v : y) sum += std::log(gpd_pdf(p, v));
  CHECK(gpd_log_likelihood(p, y) == doctest::Approx(sum).epsilon(1e-14));
}

TEST_CASE("mixture identity: GPD density is a Gamma mixture of exponentials") {
  const std::pair<double, double> params[] = {{1, 1}, {2, 3}, {0.5, 2}};
  for (auto [a, b] : params) {
    for (double y : {0.0, 0.5, 1.0, 5.0}) {
      auto integrand = [&](double z) {
        if (z <= 0) return 0.0;
        return z * std::exp(-y * z) * boost::math::gamma_p_derivative(a, b * z) * b;
      };
      boost::math::quadrature::exp_sinh<double> integrator;
      const double mix = integrator.integrate(integrand, 1e-14);
      CHECK(std::abs(mix - gpd_pdf(GpdParams::from_alpha_beta(a, b), y)) <= 1e-6);
    }
  }
}

TEST_CASE("gamma_sample moments, exponential case and small shape") {
  RngStream rng(9);
  auto moments = [&](double shape, double rate) {
    const int n = 1000000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = gamma_sample(shape, rate, rng);
      REQUIRE(x > 0);
      sum += x;
      sum2 += x * x;
    }
    const double m = sum / n;
    return std::pair(m, sum2 / n - m * m);
  };
  {
    const auto [m, v] = moments(3, 2);
    CHECK(std::abs(m - 1.5) < 3 * std::sqrt(0.75 / 1e6));
    // Var of the sample variance: (μ4 - σ⁴)/n with μ4 = 3σ⁴(1 + 2/shape).
    const double sigma4 = 0.75 * 0.75;
    const double se_v = std::sqrt((3 * sigma4 * (1 + 2.0 / 3) - sigma4) / 1e6);
    CHECK(std::abs(v - 0.75) < 3 * se_v);
  }
  {
    const auto [m, v] = moments(0.3, 1.5);
    CHECK(std::abs(m - 0.2) < 3 * std::sqrt(0.3 / 2.25 / 1e6));
  }
  std::vector<double> draws(100000);
  for (double& x : draws) x = gamma_sample(1, 1, rng);
  CHECK(oracle::ks_statistic(draws, [](double x) { return 1 - std::exp(-x); }) <
        oracle::ks_critical_1pct(draws.size()));
  for (double& x : draws) x = gamma_sample(0.4, 2, rng);
  CHECK(oracle::ks_statistic(draws, [](double x) { return oracle::gamma_cdf(0.4, 2, x); }) <
        oracle::ks_critical_1pct(draws.size()));
  CHECK_ERROR(gamma_sample(0, 1, rng), kDomain);
  CHECK_ERROR(gamma_sample(1, -1, rng), kDomain);
}

TEST_CASE("gamcon log density examples") {
  CHECK(gamcon_log_density_unnorm({2, 1}, 1) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  CHECK(gamcon_log_density_unnorm({std::numbers::e, 1}, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::isfinite(gamcon_log_density_unnorm({1.01, 500}, 200)));
  CHECK(gamcon_log_density_unnorm({3, 7}, 0.8) ==
        doctest::Approx(oracle::gamcon_log_kernel(3, 7, 0.8)).epsilon(1e-12));
  CHECK_ERROR(gamcon_log_density_unnorm({1.0, 1}, 1), kDomain);
  CHECK_ERROR(gamcon_log_density_unnorm({2, 0}, 1), kDomain);
  CHECK_ERROR(gamcon_log_density_unnorm({2, 1}, 0), kDomain);
}

TEST_CASE("gamcon mode: residual, bounds and density maximum") {
  for (double c : kCGrid) {
    for (double d : kDGrid) {
      CAPTURE(c);
      CAPTURE(d);
      const GamconParams p{c, d};
      const double m = gamcon_mode(p);
      CHECK(std::abs(gamcon_mode_equation(p, m)) <= 1e-10);
      const auto [lo, hi] = gamcon_mode_bounds(p);
      CHECK(lo <= m);
      CHECK(m <= hi);
      CHECK(m <= 2 / std::log(c));
    }
  }
  for (auto p : {GamconParams{2, 5}, GamconParams{10, 1}}) {
    const double m = gamcon_mode(p);
    const double argmax = oracle::grid_golden_max(
        [&](double x) { return oracle::gamcon_log_kernel(p.c, p.d, x); }, 1e-4,
        2 / std::log(p.c) * 1.5);
    CHECK(std::abs(m - argmax) <= 1e-6);
  }
}

TEST_CASE("gamcon normal approximation matches finite-difference curvature") {
  auto check = [](GamconParams p) {
    const auto na = gamcon_normal_approx(p);
    CHECK(na.sd > 0);
    const double h2 = oracle::second_derivative(
        [&](double x) { return oracle::gamcon_log_kernel(p.c, p.d, x); }, na.mode, na.sd * 1e-2);
    const double sd_fd = 1 / std::sqrt(-h2);
    CHECK(std::abs(na.sd - sd_fd) <= 1e-4 * sd_fd);
  };
  check({2, 5});
  check({std::numbers::e, 1});
  for (double c : kCGrid) {
    for (double d : kDGrid) check({c, d});
  }
}

TEST_CASE("Cauchy proposal matches the normal modal value") {
  CHECK(cauchy_scale_matching_normal(1) == doctest::Approx(0.7978845608028654).epsilon(1e-14));
  CHECK(cauchy_scale_matching_normal(2) == doctest::Approx(1.5957691216057308).epsilon(1e-14));
  for (double s : {0.1, 1.0, 3.7}) {
    const CauchyParams q{0.4, cauchy_scale_matching_normal(s)};
    CHECK(std::abs(cauchy_pdf(q, 0.4) - 1 / (s * std::sqrt(2 * std::numbers::pi))) <= 1e-12);
  }
  const auto q = cauchy_from_gamcon({2, 5});
  const auto na = gamcon_normal_approx({2, 5});
  CHECK(q.location == na.mode);
  CHECK(q.scale == doctest::Approx(na.sd * std::sqrt(2 / std::numbers::pi)).epsilon(1e-15));
  CHECK(cauchy_log_pdf(q, 1.3) == doctest::Approx(std::log(cauchy_pdf(q, 1.3))).epsilon(1e-14));
  RngStream rng(4);
  std::vector<double> draws(100000);
  for (double& x : draws) x = cauchy_sample(q, rng);
  CHECK(oracle::ks_statistic(draws, [&](double x) {
          return 0.5 + std::atan((x - q.location) / q.scale) / std::numbers::pi;
        }) < oracle::ks_critical_1pct(draws.size()));
}

TEST_CASE("Frechet sampler") {
  const double e1 = std::exp(-1.0);
  CHECK(frechet_from_uniform(1, e1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(frechet_from_uniform(2, e1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(frechet_cdf(1, 1) == doctest::Approx(e1).epsilon(1e-15));
  RngStream rng(6);
  std::vector<double> draws(100000);
  for (double& x : draws) x = frechet_sample(1, rng);
  CHECK(oracle::ks_statistic(draws, [](double x) { return std::exp(-1 / x); }) <
        oracle::ks_critical_1pct(draws.size()));
}

TEST_CASE("Burr sampler") {
  CHECK(burr_from_uniform(1, 0.5, 2, 0.75) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(burr_from_uniform(1, 0.5, 2, 0.0) == 0.0);
  RngStream rng(7);
  std::vector<double> draws(100000);
  for (double& x : draws) x = burr_sample(1, 0.5, 2, rng);
  auto burr_cdf_oracle = [](double x) { return 1 - std::pow(1 / (1 + std::sqrt(x)), 2); };
  CHECK(oracle::ks_statistic(draws, burr_cdf_oracle) <
        oracle::ks_critical_1pct(draws.size()));
  CHECK(burr_cdf(1, 0.5, 2, 1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("Log-gamma sampler") {
  CHECK(loggamma_cdf(1.0) == 0.0);
  RngStream rng(8);
  const int n = 1000000;
  std::vector<double> draws(n);
  for (double& x : draws) {
    x = loggamma_sample(rng);
    REQUIRE(x > 1.0);
  }
  const double g_median = boost::math::gamma_p_inv(2.0, 0.5);
  std::vector<double> sorted = draws;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  // Median standard error: 1/(2 f(m) √n) on the x scale.
  const double m = std::exp(g_median);
  const double f_m = std::log(m) / (m * m);
  CHECK(std::abs(sorted[n / 2] - m) < 4 / (2 * f_m * std::sqrt(n)));
  std::vector<double> small(draws.begin(), draws.begin() + 100000);
  CHECK(oracle::ks_statistic(small, [](double x) { return oracle::gamma_cdf(2, 1, std::log(x)); }) <
        oracle::ks_critical_1pct(small.size()));
  std::sort(small.begin(), small.end());
  const auto h = hill_estimate(small, 10000);
  CHECK(std::abs(1 / h.alpha - 1.0) < 0.3);
}

TEST_CASE("samplers are bit-reproducible") {
  RngStream a(99, 3), b(99, 3);
  for (int i = 0; i < 200; ++i) {
    CHECK(gamma_sample(2.5, 1, a) == gamma_sample(2.5, 1, b));
    CHECK(gpd_sample(GpdParams(0.4, 1), a) == gpd_sample(GpdParams(0.4, 1), b));
    CHECK(loggamma_sample(a) == loggamma_sample(b));
    CHECK(cauchy_sample({1, 2}, a) == cauchy_sample({1, 2}, b));
  }
}
