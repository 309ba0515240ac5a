#include "gpdqc/gibbs.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gpdqc/errors.h"
#include "gpdqc/estimators.h"

namespace gpdqc {

void ChainConfig::validate() const {
  if (total_iterations < 1 || burn_in < 0 || burn_in >= total_iterations) {
    std::ostringstream os;
    os << "chain needs 0 <= burn_in < total_iterations, got burn_in = " << burn_in
       << ", total = " << total_iterations;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  gpdqc::validate(hyper, allow_low_delta);
  if (initial_alpha && !(*initial_alpha > 0.0)) {
    throw Error(ErrorCategory::kValidation, "initial alpha must be positive");
  }
  if (initial_beta && !(*initial_beta > 0.0)) {
    throw Error(ErrorCategory::kValidation, "initial beta must be positive");
  }
}

std::vector<double> ChainOutput::gammas() const {
  std::vector<double> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = 1.0 / alphas[i];
  return out;
}

std::vector<double> ChainOutput::sigmas() const {
  std::vector<double> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = betas[i] / alphas[i];
  return out;
}

std::vector<double> latent_update(const ChainState& state, std::span<const double> y,
                                  RngStream& rng) {
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    z[i] = gamma_sample(state.alpha + 1.0, state.beta + y[i], rng);
  }
  return z;
}

double hm_acceptance_probability(double current, double proposal,
                                 const GamconParams& target, const CauchyParams& q) {
  if (!(proposal > 0.0)) return 0.0;
  if (proposal == current) return 1.0;
  const double log_ratio = cauchy_log_pdf(q, current) +
                           gamcon_log_density_unnorm(target, proposal) -
                           cauchy_log_pdf(q, proposal) -
                           gamcon_log_density_unnorm(target, current);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

HmStep hm_alpha_step(double current_alpha, const GamconParams& target, RngStream& rng) {
  const CauchyParams q = cauchy_from_gamcon(target);
  const double proposal = cauchy_sample(q, rng);
  if (!(proposal > 0.0)) return {current_alpha, false};
  const double rho = hm_acceptance_probability(current_alpha, proposal, target, q);
  if (rho >= 1.0 || rng.uniform() < rho) return {proposal, true};
  return {current_alpha, false};
}

ChainState gibbs_iteration(const ChainState& state, std::span<const double> y,
                           const DamslethHyper& hyper, RngStream& rng) {
  ChainState next;
  next.z = latent_update(state, y, rng);
  const PosteriorHyper post = posterior_update(hyper, next.z);
  const GamconParams target = post.alpha_conditional();
  if (!(target.c > 1.0) || !std::isfinite(target.c)) {
    std::ostringstream os;
    os << "conditional Gamcon II parameter c = eta'/mu' = " << target.c
       << " is not above 1";
    throw Error(ErrorCategory::kDomain, os.str());
  }
  const HmStep step = hm_alpha_step(state.alpha, target, rng);
  next.alpha = step.alpha;
  next.accepted = step.accepted;
  const GammaParams beta_law = conditional_beta_params(post, next.alpha);
  if (!std::isfinite(beta_law.shape) || !std::isfinite(beta_law.rate) ||
      !(beta_law.rate > 0.0)) {
    std::ostringstream os;
    os << "conditional Gamma(" << beta_law.shape << ", " << beta_law.rate
       << ") for beta is not representable";
    throw Error(ErrorCategory::kDomain, os.str());
  }
  next.beta = gamma_sample(beta_law.shape, beta_law.rate, rng);
  return next;
}

ChainOutput run_chain(std::span<const double> y, const ChainConfig& cfg) {
  cfg.validate();
  if (y.empty()) throw Error(ErrorCategory::kValidation, "run_chain: no excesses");
  for (double v : y) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCategory::kValidation, "run_chain: excesses must be non-negative");
    }
  }
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  ChainState state{cfg.initial_alpha.value_or(1.0),
                   cfg.initial_beta.value_or(mean > 0.0 ? mean : 1.0),
                   {},
                   false};

  RngStream rng(cfg.seed, cfg.stream_id);
  ChainOutput out;
  const auto retained = static_cast<std::size_t>(cfg.total_iterations - cfg.burn_in);
  out.alphas.reserve(retained);
  out.betas.reserve(retained);
  out.accepted.reserve(static_cast<std::size_t>(cfg.total_iterations));
  std::size_t accepted_retained = 0;
  for (int m = 0; m < cfg.total_iterations; ++m) {
    try {
      state = gibbs_iteration(state, y, cfg.hyper, rng);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "Gibbs iteration " << m + 1 << ": " << e.what();
      throw Error(e.category(), os.str());
    }
    out.accepted.push_back(state.accepted ? 1 : 0);
    if (m >= cfg.burn_in) {
      out.alphas.push_back(state.alpha);
      out.betas.push_back(state.beta);
      if (state.accepted) ++accepted_retained;
    }
  }
  out.acceptance_rate = static_cast<double>(accepted_retained) / static_cast<double>(retained);
  return out;
}

ChainOutput run_chain(const ExcessSample& sample, ChainConfig cfg) {
  sample.validate();
  if (!cfg.initial_alpha) {
    try {
      cfg.initial_alpha = hill_estimate(sample).alpha;
    } catch (const Error&) {
      cfg.initial_alpha = 1.0;
    }
  }
  if (!cfg.initial_beta && sample.threshold > 0.0) cfg.initial_beta = sample.threshold;
  return run_chain(sample.excesses, cfg);
}

}  // namespace gpdqc
