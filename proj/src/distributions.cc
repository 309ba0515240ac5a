#include "gpdqc/distributions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpdqc/errors.h"
#include "gpdqc/special_math.h"

namespace gpdqc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void domain_error(const std::string& msg) {
  throw Error(ErrorCategory::kDomain, msg);
}

// (1 + γy/σ)^(-1/γ) evaluated as exp(-log1p(γy/σ)/γ) so it is continuous
// through γ = 0.
double gpd_survival(const GpdParams& p, double y) {
  if (p.gamma() == 0.0) return std::exp(-y / p.sigma());
  return std::exp(-std::log1p(p.gamma() * y / p.sigma()) / p.gamma());
}

}  // namespace

GpdParams::GpdParams(double gamma, double sigma) : gamma_(gamma), sigma_(sigma) {
  if (!std::isfinite(gamma) || !(sigma > 0.0) || !std::isfinite(sigma)) {
    std::ostringstream os;
    os << "GPD parameters need finite gamma and sigma > 0, got (" << gamma
       << ", " << sigma << ")";
    domain_error(os.str());
  }
}

GpdParams GpdParams::from_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    std::ostringstream os;
    os << "GPD(alpha, beta) needs alpha > 0 and beta > 0, got (" << alpha << ", "
       << beta << ")";
    domain_error(os.str());
  }
  return GpdParams(1.0 / alpha, beta / alpha);
}

double GpdParams::alpha() const {
  if (!(gamma_ > 0.0)) domain_error("alpha = 1/gamma requires gamma > 0");
  return 1.0 / gamma_;
}

double GpdParams::beta() const {
  if (!(gamma_ > 0.0)) domain_error("beta = sigma/gamma requires gamma > 0");
  return sigma_ / gamma_;
}

double GpdParams::upper_endpoint() const {
  return gamma_ < 0.0 ? -sigma_ / gamma_ : kInf;
}

double gpd_log_pdf(const GpdParams& p, double y) {
  if (!(y >= 0.0) || y > p.upper_endpoint()) {
    std::ostringstream os;
    os << "gpd_pdf: y = " << y << " outside the support";
    domain_error(os.str());
  }
  if (p.gamma() == 0.0) return -std::log(p.sigma()) - y / p.sigma();
  return -std::log(p.sigma()) -
         (1.0 / p.gamma() + 1.0) * std::log1p(p.gamma() * y / p.sigma());
}

double gpd_pdf(const GpdParams& p, double y) { return std::exp(gpd_log_pdf(p, y)); }

double gpd_cdf(const GpdParams& p, double y) {
  if (!(y > 0.0)) return 0.0;
  if (y >= p.upper_endpoint()) return 1.0;
  return -std::expm1(std::log(gpd_survival(p, y)));
}

double gpd_quantile(const GpdParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    std::ostringstream os;
    os << "gpd_quantile: probability must lie in (0,1), got " << prob;
    domain_error(os.str());
  }
  const double log_surv = std::log1p(-prob);
  if (p.gamma() == 0.0) return -p.sigma() * log_surv;
  return p.sigma() * std::expm1(-p.gamma() * log_surv) / p.gamma();
}

double gpd_sample(const GpdParams& p, RngStream& rng) {
  return gpd_quantile(p, rng.uniform());
}

double gpd_log_likelihood(const GpdParams& p, std::span<const double> y) {
  double total = 0.0;
  for (double v : y) {
    if (!(v >= 0.0) || v > p.upper_endpoint()) return -kInf;
    total += gpd_log_pdf(p, v);
  }
  return total;
}

double gamma_sample(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(rate)) {
    std::ostringstream os;
    os << "gamma_sample: need shape > 0 and rate > 0, got (" << shape << ", "
       << rate << ")";
    domain_error(os.str());
  }
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform(), 1.0 / shape);
    return gamma_sample(shape + 1.0, rate, rng) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

void validate(const GamconParams& p) {
  if (!(p.c > 1.0) || !(p.d > 0.0) || !std::isfinite(p.c) || !std::isfinite(p.d)) {
    std::ostringstream os;
    os << "Gamcon II parameters need c > 1 and d > 0, got (c=" << p.c
       << ", d=" << p.d << ")";
    domain_error(os.str());
  }
}

double gamcon_log_density_unnorm(const GamconParams& p, double x) {
  validate(p);
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "Gamcon II density: x must be positive, got " << x;
    domain_error(os.str());
  }
  return ln_gamma(p.d * x + 1.0) - p.d * ln_gamma(x) -
         p.d * x * (std::log(p.c) + std::log(p.d));
}

std::pair<double, double> gamcon_mode_bounds(const GamconParams& p) {
  validate(p);
  const double log_c = std::log(p.c);
  const double num = 1.0 - 1.0 / p.d;
  const double den = log_c + std::log(p.d / 2.0);
  const double lower = num > 0.0 && den > 0.0 ? num / den : 0.0;
  return {lower, 2.0 / log_c};
}

double gamcon_mode_equation(const GamconParams& p, double m) {
  return digamma(p.d * m + 1.0) - digamma(m) - std::log(p.d) - std::log(p.c);
}

double gamcon_mode(const GamconParams& p) {
  auto [lo, hi] = gamcon_mode_bounds(p);
  // The equation tends to +inf as M -> 0+, so any small positive value works
  // as a lower bracket when the published bound is not positive.
  if (!(lo > 0.0)) lo = 1e-8 * std::min(1.0, hi);
  auto f = [&p](double m) { return gamcon_mode_equation(p, m); };
  try {
    return bisect(f, lo, hi, 0.0).root;
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::kBracket) throw;
  }
  try {
    return bisect(f, 0.9 * lo, 1.1 * hi, 0.0).root;
  } catch (const Error& e) {
    std::ostringstream os;
    os << "gamcon_mode: no root in the widened bracket for (c=" << p.c
       << ", d=" << p.d << "): " << e.what();
    throw Error(ErrorCategory::kConvergence, os.str());
  }
}

GamconNormalApprox gamcon_normal_approx(const GamconParams& p) {
  const double mode = gamcon_mode(p);
  const double radicand =
      p.d * trigamma(mode) - p.d * p.d * trigamma(p.d * mode + 1.0);
  if (!(radicand > 0.0) || !std::isfinite(radicand)) {
    std::ostringstream os;
    os << "gamcon_normal_approx: non-positive curvature " << radicand
       << " at mode " << mode << " for (c=" << p.c << ", d=" << p.d << ")";
    throw Error(ErrorCategory::kCurvature, os.str());
  }
  return {mode, 1.0 / std::sqrt(radicand)};
}

double cauchy_scale_matching_normal(double sd) {
  if (!(sd > 0.0)) domain_error("cauchy_scale_matching_normal: sd must be positive");
  return sd * std::sqrt(2.0 / M_PI);
}

CauchyParams cauchy_from_gamcon(const GamconParams& p) {
  const GamconNormalApprox approx = gamcon_normal_approx(p);
  return {approx.mode, cauchy_scale_matching_normal(approx.sd)};
}

double cauchy_log_pdf(const CauchyParams& p, double x) {
  const double t = (x - p.location) / p.scale;
  return -std::log(M_PI * p.scale) - std::log1p(t * t);
}

double cauchy_pdf(const CauchyParams& p, double x) {
  return std::exp(cauchy_log_pdf(p, x));
}

double cauchy_sample(const CauchyParams& p, RngStream& rng) {
  return p.location + p.scale * std::tan(M_PI * (rng.uniform() - 0.5));
}

double frechet_cdf(double beta, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-std::pow(x, -1.0 / beta));
}

double frechet_from_uniform(double beta, double u) {
  return std::pow(-std::log(u), -beta);
}

double frechet_sample(double beta, RngStream& rng) {
  if (!(beta > 0.0)) domain_error("frechet_sample: beta must be positive");
  return frechet_from_uniform(beta, rng.uniform());
}

double burr_cdf(double beta, double tau, double lambda, double x) {
  if (!(x > 0.0)) return 0.0;
  return -std::expm1(lambda * std::log(beta / (beta + std::pow(x, tau))));
}

double burr_from_uniform(double beta, double tau, double lambda, double u) {
  const double inner = beta * std::expm1(-std::log1p(-u) / lambda);
  return std::pow(inner, 1.0 / tau);
}

double burr_sample(double beta, double tau, double lambda, RngStream& rng) {
  if (!(beta > 0.0) || !(tau > 0.0) || !(lambda > 0.0)) {
    domain_error("burr_sample: all parameters must be positive");
  }
  return burr_from_uniform(beta, tau, lambda, rng.uniform());
}

double loggamma_cdf(double x) {
  if (!(x > 1.0)) return 0.0;
  const double g = std::log(x);
  // Gamma(2, 1) CDF at g.
  return -std::expm1(-g) - g * std::exp(-g);
}

double loggamma_sample(RngStream& rng) { return std::exp(gamma_sample(2.0, 1.0, rng)); }

}  // namespace gpdqc
