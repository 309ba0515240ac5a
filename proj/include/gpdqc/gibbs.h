#ifndef GPDQC_GIBBS_H_
#define GPDQC_GIBBS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpdqc/distributions.h"
#include "gpdqc/prior.h"
#include "gpdqc/rng.h"
#include "gpdqc/sample.h"

namespace gpdqc {

struct ChainConfig {
  int total_iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  DamslethHyper hyper{1.0, 2.0, 1.0};
  bool allow_low_delta = false;
  // Starting point; run_chain(ExcessSample) fills these from the Hill
  // estimate and the threshold when unset.
  std::optional<double> initial_alpha;
  std::optional<double> initial_beta;

  // Throws Error(kValidation).
  void validate() const;
};

struct ChainState {
  double alpha;
  double beta;
  std::vector<double> z;
  bool accepted = false;
};

struct ChainOutput {
  std::vector<double> alphas;  // post burn-in
  std::vector<double> betas;
  double acceptance_rate = 0.0;  // over the retained iterations
  std::vector<std::uint8_t> accepted;  // every iteration, burn-in included

  std::size_t size() const { return alphas.size(); }
  // γ = 1/α and σ = β/α per retained draw.
  std::vector<double> gammas() const;
  std::vector<double> sigmas() const;
};

// z_i ~ Gamma(α + 1, β + y_i), independently.
std::vector<double> latent_update(const ChainState& state, std::span<const double> y,
                                  RngStream& rng);

// Acceptance probability of the independence Metropolis–Hastings move
// current -> proposal with Cauchy proposal density q:
//   min(1, q(current) ξ(proposal) / (q(proposal) ξ(current))).
// The Gamcon normalizer cancels. Zero for proposal <= 0 (outside the
// target's support).
double hm_acceptance_probability(double current, double proposal,
                                 const GamconParams& target, const CauchyParams& q);

struct HmStep {
  double alpha;
  bool accepted;
};

// One independence MH step for α targeting Gamcon II(c, d), proposing from
// the Cauchy with the mode and modal value of its normal approximation.
HmStep hm_alpha_step(double current_alpha, const GamconParams& target, RngStream& rng);

// One sweep: z from the latent conditional, α by one MH step on
// Gamcon II(η'/μ', δ'), then β ~ Gamma(δ'α + 1, δ'η').
ChainState gibbs_iteration(const ChainState& state, std::span<const double> y,
                           const DamslethHyper& hyper, RngStream& rng);

// Requires at least one excess. Start defaults to α = 1 and β = mean excess
// (1 if that is zero) when the config leaves them unset.
ChainOutput run_chain(std::span<const double> y, const ChainConfig& cfg);

// Same, starting from the Hill estimate (α) and the threshold (β) unless the
// config says otherwise.
ChainOutput run_chain(const ExcessSample& sample, ChainConfig cfg);

}  // namespace gpdqc

#endif  // GPDQC_GIBBS_H_
