#include "gpdqc/pot.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpdqc/errors.h"

namespace gpdqc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_years(const ExcessSample& sample) {
  if (!sample.years || !(*sample.years > 0.0)) {
    throw Error(ErrorCategory::kValidation,
                "the observation period in years is required for rates");
  }
  return *sample.years;
}

}  // namespace

double QuantileRequest::ratio() const { return exceedance_ratio(n, p, k); }

QuantileRequest quantile_request(const ExcessSample& sample, double p) {
  return {p, sample.n, sample.k(), sample.threshold};
}

namespace {

double checked_log_ratio(const QuantileRequest& req) {
  const double r = req.ratio();
  if (!(req.p > 0.0) || !(r > 0.0) || r > 1.0) {
    std::ostringstream os;
    os << "POT quantile needs 0 < np/k <= 1, got np/k = " << r
       << " (p = " << req.p << ", n = " << req.n << ", k = " << req.k << ")";
    throw Error(ErrorCategory::kDomain, os.str());
  }
  return std::log(r);
}

}  // namespace

double pot_quantile(double alpha, double beta, const QuantileRequest& req) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCategory::kDomain, "pot_quantile: need alpha > 0 and beta > 0");
  }
  const double log_r = checked_log_ratio(req);
  return req.u + beta * std::expm1(-log_r / alpha);
}

double pot_quantile(const TailFit& fit, const QuantileRequest& req) {
  if (!fit.converged) {
    throw Error(ErrorCategory::kDomain, "pot_quantile: fit did not converge");
  }
  const double log_r = checked_log_ratio(req);
  if (fit.gamma == 0.0) return req.u - fit.sigma * log_r;
  return req.u + fit.sigma * std::expm1(-fit.gamma * log_r) / fit.gamma;
}

std::vector<double> posterior_quantile_draws(const ChainOutput& chain,
                                             const QuantileRequest& req) {
  if (chain.size() == 0) throw Error(ErrorCategory::kValidation, "empty chain");
  std::vector<double> out(chain.size());
  for (std::size_t m = 0; m < chain.size(); ++m) {
    try {
      out[m] = pot_quantile(chain.alphas[m], chain.betas[m], req);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "draw " << m << ": " << e.what();
      throw Error(e.category(), os.str());
    }
  }
  return out;
}

double empirical_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCategory::kValidation, "no draws");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
  const double a = sorted[lo];
  const double b = sorted[lo + 1];
  if (std::isinf(b)) return b;
  return a + frac * (b - a);
}

PosteriorSummary summarize(std::span<const double> draws, double level) {
  if (draws.size() < 10) {
    std::ostringstream os;
    os << "summarize needs at least 10 draws, got " << draws.size();
    throw Error(ErrorCategory::kValidation, os.str());
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCategory::kValidation, "credibility level must lie in (0,1)");
  }
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  std::size_t finite = 0;
  for (double v : sorted) {
    if (std::isfinite(v)) {
      sum += v;
      ++finite;
    }
  }
  const double tail = (1.0 - level) / 2.0;
  return {empirical_quantile(sorted, 0.5),
          finite ? sum / static_cast<double>(finite) : std::numeric_limits<double>::quiet_NaN(),
          empirical_quantile(sorted, tail), empirical_quantile(sorted, 1.0 - tail), level};
}

double predictive_quantile(const ChainOutput& chain, double prob) {
  if (chain.size() == 0) throw Error(ErrorCategory::kValidation, "empty chain");
  double sum = 0.0;
  for (std::size_t m = 0; m < chain.size(); ++m) {
    sum += gpd_quantile(GpdParams::from_alpha_beta(chain.alphas[m], chain.betas[m]), prob);
  }
  return sum / static_cast<double>(chain.size());
}

double return_period_probability(const ExcessSample& sample, double years_n) {
  const double years = require_years(sample);
  if (!(years_n > 0.0)) {
    throw Error(ErrorCategory::kValidation, "return period must be positive");
  }
  return years / (years_n * static_cast<double>(sample.n));
}

std::vector<double> return_level_draws(const ChainOutput& chain, double years_n,
                                       const ExcessSample& sample) {
  return posterior_quantile_draws(
      chain, quantile_request(sample, return_period_probability(sample, years_n)));
}

PosteriorSummary return_level(const ChainOutput& chain, double years_n,
                              const ExcessSample& sample, double level) {
  return summarize(return_level_draws(chain, years_n, sample), level);
}

double return_level(const TailFit& fit, double years_n, const ExcessSample& sample) {
  return pot_quantile(fit,
                      quantile_request(sample, return_period_probability(sample, years_n)));
}

namespace {

double premium(double rate, double gamma, double sigma) {
  return gamma < 1.0 ? rate * sigma / (1.0 - gamma) : kInf;
}

}  // namespace

double net_premium(const TailFit& fit, const ExcessSample& sample) {
  const double rate = static_cast<double>(sample.k()) / require_years(sample);
  if (!fit.converged) throw Error(ErrorCategory::kDomain, "net_premium: fit did not converge");
  return premium(rate, fit.gamma, fit.sigma);
}

std::vector<double> net_premium_draws(const ChainOutput& chain, const ExcessSample& sample) {
  const double rate = static_cast<double>(sample.k()) / require_years(sample);
  std::vector<double> out(chain.size());
  for (std::size_t m = 0; m < chain.size(); ++m) {
    out[m] = premium(rate, 1.0 / chain.alphas[m], chain.betas[m] / chain.alphas[m]);
  }
  return out;
}

PremiumSummary net_premium(const ChainOutput& chain, const ExcessSample& sample,
                           double level) {
  const std::vector<double> draws = net_premium_draws(chain, sample);
  const auto infinite =
      static_cast<std::size_t>(std::count_if(draws.begin(), draws.end(),
                                             [](double v) { return std::isinf(v); }));
  if (infinite == draws.size()) {
    throw Error(ErrorCategory::kDegenerate,
                "net_premium: every posterior draw has gamma >= 1 (infinite mean)");
  }
  return {summarize(draws, level), infinite,
          static_cast<double>(infinite) / static_cast<double>(draws.size())};
}

}  // namespace gpdqc
