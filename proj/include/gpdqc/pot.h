#ifndef GPDQC_POT_H_
#define GPDQC_POT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "gpdqc/estimators.h"
#include "gpdqc/gibbs.h"
#include "gpdqc/sample.h"

namespace gpdqc {

// Equal-tailed summary of a set of draws.
struct PosteriorSummary {
  double median;
  double mean;  // over finite draws only
  double ci_lo;
  double ci_hi;
  double level;
};

// Exceedance probability p for a sample of size n with k excesses over u.
struct QuantileRequest {
  double p;
  std::size_t n;
  std::size_t k;
  double u;

  // np/k; must lie in (0, 1] for the quantile to sit above u.
  double ratio() const;
};

QuantileRequest quantile_request(const ExcessSample& sample, double p);

// u + β[(np/k)^(-1/α) - 1]. Throws Error(kDomain) if np/k > 1.
double pot_quantile(double alpha, double beta, const QuantileRequest& req);
// Same quantile from a (γ, σ) fit, valid for any real γ.
double pot_quantile(const TailFit& fit, const QuantileRequest& req);

// pot_quantile applied to every retained (α, β) draw.
std::vector<double> posterior_quantile_draws(const ChainOutput& chain,
                                             const QuantileRequest& req);

// Linear interpolation between order statistics at position (K - 1)q of the
// ascending draws. +inf draws are allowed and sort last.
double empirical_quantile(std::span<const double> sorted, double q);

// Median and equal-tailed interval at the given level. Needs at least 10
// draws; throws Error(kValidation) otherwise.
PosteriorSummary summarize(std::span<const double> draws, double level);

// Average over draws of the GPD(α, β) quantile function at prob.
double predictive_quantile(const ChainOutput& chain, double prob);

// p = T/(N n): an N-year level for a sample observed over T years, with the
// exceedance rate estimated by k/T.
double return_period_probability(const ExcessSample& sample, double years_n);
std::vector<double> return_level_draws(const ChainOutput& chain, double years_n,
                                       const ExcessSample& sample);
PosteriorSummary return_level(const ChainOutput& chain, double years_n,
                              const ExcessSample& sample, double level);
double return_level(const TailFit& fit, double years_n, const ExcessSample& sample);

// Expected yearly total of excesses, λσ/(1 - γ) with λ = k/T. +inf when
// γ >= 1 (infinite mean).
double net_premium(const TailFit& fit, const ExcessSample& sample);
std::vector<double> net_premium_draws(const ChainOutput& chain, const ExcessSample& sample);

struct PremiumSummary {
  PosteriorSummary summary;  // γ >= 1 draws count as +inf in median and interval
  std::size_t infinite_draws;
  double infinite_fraction;
};

// Throws Error(kDegenerate) if every draw has γ >= 1.
PremiumSummary net_premium(const ChainOutput& chain, const ExcessSample& sample,
                           double level);

}  // namespace gpdqc

#endif  // GPDQC_POT_H_
