#ifndef GPDQC_PRIOR_H_
#define GPDQC_PRIOR_H_

#include <istream>
#include <span>
#include <string>
#include <utility>
#include <variant>

#include "gpdqc/distributions.h"
#include "gpdqc/sample.h"

namespace gpdqc {

// Damsleth's conjugate prior for the Gamma mixing law:
//   α ~ Gamcon II(η/μ, δ),   β | α ~ Gamma(δα + 1, δη).
struct DamslethHyper {
  double delta;
  double eta;
  double mu;

  GamconParams alpha_prior() const { return {eta / mu, delta}; }
};

// Below this δ the Gibbs sampler is numerically unstable in practice.
inline constexpr double kMinStableDelta = 0.5;

// Requires δ > 0 and η > μ > 0; additionally δ > 0.5 unless allow_low_delta.
// Throws Error(kValidation).
void validate(const DamslethHyper& hyper, bool allow_low_delta = false);

// Conditional hyperparameters given latent z:
//   δ' = δ + k,  η' = (δη + Σz)/(δ + k),  μ' = μ^(δ/(δ+k)) (Πz)^(1/(δ+k)).
struct PosteriorHyper {
  double delta;
  double eta;
  double mu;

  // π(α | z) = Gamcon II(η'/μ', δ').
  GamconParams alpha_conditional() const { return {eta / mu, delta}; }
};

// μ' is formed from a weighted mean of logs. Throws Error(kDomain) if any
// z_i <= 0.
PosteriorHyper posterior_update(const DamslethHyper& prior, std::span<const double> z);

struct GammaParams {
  double shape;
  double rate;
};

// π(β | α, z) = Gamma(δ'α + 1, δ'η').
GammaParams conditional_beta_params(const PosteriorHyper& post, double alpha);
// π(β | α) = Gamma(δα + 1, δη).
GammaParams prior_beta_params(const DamslethHyper& prior, double alpha);

// Empirical Bayes with δ = 1: the prior mean of β | α̂ is set to β̂ and the
// prior mean of α (Gamma(2, ln(η/μ)) when δ = 1) to α̂:
//   η = (α̂ + 1)/β̂,   μ = (α̂ + 1) exp(-2/α̂)/β̂.
DamslethHyper empirical_hyperparameters(double alpha_hat, double beta_hat);
// Uses the Hill estimate and β̂ = x_{n-k,n} = threshold.
DamslethHyper empirical_hyperparameters(const ExcessSample& sample);

// μ such that the Gamcon II(η/μ, δ) prior on α has its mode at alpha_mode:
//   μ = η exp(ln δ + ψ(alpha_mode) - ψ(δ alpha_mode + 1)).
double mu_for_alpha_mode(double eta, double delta, double alpha_mode);

// An expert gives a rare level q_max and bounds [p1, p2] on its exceedance
// probability, with uncertainty ε.
struct ExpertOpinionOneQuantile {
  double q_max;
  double p1;
  double p2;
  double epsilon;
};

// An expert gives two rare levels with their exceedance probabilities and a
// confidence δ in the opinion.
struct ExpertOpinionTwoQuantiles {
  double q_max1;
  double q_max2;
  double p1;
  double p2;
  double delta;
};

using ExpertOpinion = std::variant<ExpertOpinionOneQuantile, ExpertOpinionTwoQuantiles>;

// Bounds β1 <= β <= β2 implied by q_max at α = alpha_hat.
std::pair<double, double> expert_beta_bounds(const ExpertOpinionOneQuantile& op,
                                             const ExcessSample& sample,
                                             double alpha_hat);

// α fixed at its Hill estimate; δ and η from a Gaussian approximation of
// Gamma(δα̂ + 1, δη) putting mass ε/2 below β1 and above β2; μ places the
// mode of the α prior at α̂. Throws Error(kInfeasible) when the opinion
// cannot be matched (δ <= 0 or β1 >= β2).
//
// Only the "fix α, bound β" direction is built; bounding α at fixed β would
// be a separate constructor.
DamslethHyper expert_hyperparameters_one_quantile(const ExpertOpinionOneQuantile& op,
                                                  const ExcessSample& sample);

struct TwoQuantileSolution {
  double alpha;
  double beta;
};

// Solves q_i = u + β[(np_i/k)^(-1/α) - 1], i = 1, 2. The ratio of the two
// equations eliminates β; α is then bracketed in [1e-3, 1e3] and bisected.
TwoQuantileSolution solve_two_quantiles(const ExpertOpinionTwoQuantiles& op,
                                        const ExcessSample& sample);

// η = α₀/β₀ (mode of β | α₀ at β₀), μ from mu_for_alpha_mode, δ from the
// opinion.
DamslethHyper expert_hyperparameters_two_quantiles(const ExpertOpinionTwoQuantiles& op,
                                                   const ExcessSample& sample);

DamslethHyper expert_hyperparameters(const ExpertOpinion& op, const ExcessSample& sample);

// Flat "key = value" text, '#' starts a comment. Keys q_max, p1, p2,
// epsilon select the one-quantile form; q_max1, q_max2, p1, p2, delta the
// two-quantile form.
ExpertOpinion parse_expert_opinion(std::istream& in);
ExpertOpinion load_expert_opinion(const std::string& path);

}  // namespace gpdqc

#endif  // GPDQC_PRIOR_H_
