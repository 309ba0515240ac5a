#ifndef GPDQC_DISTRIBUTIONS_H_
#define GPDQC_DISTRIBUTIONS_H_

#include <span>
#include <utility>

#include "gpdqc/rng.h"

namespace gpdqc {

// Generalized Pareto distribution with shape γ and scale σ:
//   F(y) = 1 - (1 + γy/σ)^(-1/γ)   (γ != 0),   1 - exp(-y/σ)   (γ = 0).
// For γ > 0 the heavy-tail parameterization α = 1/γ, β = σ/γ is available,
// with density f(y) = (α/β)(1 + y/β)^(-α-1).
class GpdParams {
 public:
  GpdParams(double gamma, double sigma);
  static GpdParams from_alpha_beta(double alpha, double beta);

  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  // Both throw Error(kDomain) unless γ > 0.
  double alpha() const;
  double beta() const;

  // Upper end of the support; +inf when γ >= 0.
  double upper_endpoint() const;

 private:
  double gamma_;
  double sigma_;
};

double gpd_pdf(const GpdParams& p, double y);
double gpd_log_pdf(const GpdParams& p, double y);
double gpd_cdf(const GpdParams& p, double y);
double gpd_quantile(const GpdParams& p, double prob);
double gpd_sample(const GpdParams& p, RngStream& rng);
// Sum of log densities; -inf if any observation falls outside the support.
double gpd_log_likelihood(const GpdParams& p, std::span<const double> y);

// Gamma(shape, rate), density ∝ z^(shape-1) exp(-rate z). Marsaglia–Tsang
// squeeze method; shape < 1 is boosted through shape + 1.
double gamma_sample(double shape, double rate, RngStream& rng);

// Damsleth's type II Gamcon distribution, density on x > 0
//   ξ(x) ∝ Γ(dx + 1) Γ(x)^(-d) (cd)^(-dx),   c > 1, d > 0.
struct GamconParams {
  double c;
  double d;
};

void validate(const GamconParams& p);

// Log of ξ without the normalizing integral.
double gamcon_log_density_unnorm(const GamconParams& p, double x);

// Published bounds (1 - 1/d)/(ln c + ln(d/2)) <= mode <= 2/ln c. The lower
// bound is reported as 0 when it is vacuous (d <= 1 or cd <= 2).
std::pair<double, double> gamcon_mode_bounds(const GamconParams& p);

// Root of ψ(dM + 1) - ψ(M) - ln d - ln c = 0, found by bisection inside the
// published bounds (widened by 10% once before giving up).
double gamcon_mode(const GamconParams& p);

// Residual ψ(dM + 1) - ψ(M) - ln d - ln c of the mode equation.
double gamcon_mode_equation(const GamconParams& p, double m);

struct GamconNormalApprox {
  double mode;
  double sd;
};

// Laplace approximation at the mode: sd = (d ψ'(M) - d² ψ'(dM + 1))^(-1/2).
// Throws Error(kCurvature) if the radicand is not positive.
GamconNormalApprox gamcon_normal_approx(const GamconParams& p);

struct CauchyParams {
  double location;
  double scale;
};

// Scale of the Cauchy density whose modal value equals that of N(·, sd²):
// 1/(π scale) = 1/(sd √(2π))  =>  scale = sd √(2/π).
double cauchy_scale_matching_normal(double sd);
CauchyParams cauchy_from_gamcon(const GamconParams& p);
double cauchy_pdf(const CauchyParams& p, double x);
double cauchy_log_pdf(const CauchyParams& p, double x);
double cauchy_sample(const CauchyParams& p, RngStream& rng);

// Fréchet(β): F(x) = exp(-x^(-1/β)), x > 0.
double frechet_cdf(double beta, double x);
double frechet_from_uniform(double beta, double u);
double frechet_sample(double beta, RngStream& rng);

// Burr(β, τ, λ): F(x) = 1 - (β/(β + x^τ))^λ, x > 0.
double burr_cdf(double beta, double tau, double lambda, double x);
double burr_from_uniform(double beta, double tau, double lambda, double u);
double burr_sample(double beta, double tau, double lambda, RngStream& rng);

// Log-gamma with tail index 1: X = exp(G), G ~ Gamma(2, 1), so the density
// is x^(-2) ln x on x > 1.
double loggamma_cdf(double x);
double loggamma_sample(RngStream& rng);

}  // namespace gpdqc

#endif  // GPDQC_DISTRIBUTIONS_H_
