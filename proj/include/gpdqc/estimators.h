#ifndef GPDQC_ESTIMATORS_H_
#define GPDQC_ESTIMATORS_H_

#include <span>
#include <string>
#include <string_view>

#include "gpdqc/distributions.h"
#include "gpdqc/sample.h"

namespace gpdqc {

enum class TailMethod { kHill, kMl, kPwm, kMti, kZipfG, kBayesQc, kExpBayes };

std::string_view method_name(TailMethod method);
// Accepts the names produced by method_name() case-insensitively, plus
// "bayes" for kBayesQc. Throws Error(kValidation) on anything else.
TailMethod parse_method(std::string_view name);

// Point estimate of the GPD fitted to the excesses.
struct TailFit {
  double gamma = 0.0;
  double sigma = 0.0;
  TailMethod method = TailMethod::kMl;
  bool converged = false;
  std::string note;  // e.g. why a fit did not converge

  GpdParams params() const { return GpdParams(gamma, sigma); }
};

struct HillEstimate {
  double alpha;  // inverse of the mean log-spacing
  double beta;   // x_{n-k,n}
};

// Hill estimator on ascending order statistics x, using the top k and the
// reference x_{n-k,n}. Divisor 1/k.
HillEstimate hill_estimate(std::span<const double> sorted_x, std::size_t k);
HillEstimate hill_estimate(const ExcessSample& sample);

// Moment estimator of Dekkers, Einmahl and de Haan.
struct MomentEstimate {
  double gamma;
  double sigma;  // x_{n-k,n} M1 (1 - γ₋)
};
MomentEstimate mti_dedh_estimate(std::span<const double> sorted_x, std::size_t k);
// γ̂ = M1 + 1 - (1/2)(1 - M1²/M2)^(-1) from the first two log-spacing moments.
double moment_gamma(double m1, double m2);

// Least-squares slope of ln x_{n-i+1,n} against ln((k+1)/i), i = 1..k.
double zipf_estimate(std::span<const double> sorted_x, std::size_t k);

// Generalized Zipf: least-squares slope of ln UH_j against ln((k+1)/j),
// j = 1..k, where UH_j = x_{n-j,n} H_j and H_j is the Hill statistic on the
// top j observations (generalized quantile plot of Beirlant, Dierckx and
// Guillou).
double zipf_g_estimate(std::span<const double> sorted_x, std::size_t k);

// Profile likelihood of the GPD in τ = γ/σ, with γ(τ) = mean ln(1 + τy).
double gpd_profile_log_likelihood(std::span<const double> y, double tau);

// Maximum likelihood via the profile reduction: 400-point τ grid, highest
// interior local maximum, golden-section refinement. Never throws on
// numerical trouble; reports converged = false instead.
TailFit ml_gpd_fit(std::span<const double> y);
TailFit ml_gpd_fit(const ExcessSample& sample);

// Probability weighted moments (Hosking–Wallis).
TailFit pwm_gpd_fit(std::span<const double> y);
TailFit pwm_gpd_fit(const ExcessSample& sample);

// Dispatches on method for the frequentist estimators. Hill, MTI and ZipfG
// use the threshold as x_{n-k,n}; Hill and ZipfG get the scale γ̂·u.
TailFit fit_tail(TailMethod method, const ExcessSample& sample);

// Exponential-tail Bayes with a Gamma(a, b) prior on the rate λ = 1/σ.
struct ExpBayesQuantiles {
  double q_bayes;  // plug-in of the posterior mean of λ
  double q_pred;   // quantile of the GPD(a+k, b+S_k) predictive
  double q_post;   // posterior mean of u + σ ln(k/np)
  double posterior_shape;
  double posterior_rate;
  GpdParams predictive;
};
ExpBayesQuantiles exp_bayes_quantiles(const ExcessSample& sample, double a,
                                      double b, double p);

}  // namespace gpdqc

#endif  // GPDQC_ESTIMATORS_H_
