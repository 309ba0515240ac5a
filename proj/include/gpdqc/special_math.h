#ifndef GPDQC_SPECIAL_MATH_H_
#define GPDQC_SPECIAL_MATH_H_

#include <functional>

namespace gpdqc {

// ln Γ(x) for x > 0.
double ln_gamma(double x);

// ψ(x) = d/dx ln Γ(x) for x > 0. The argument is shifted upward by the
// recurrence ψ(x+1) = ψ(x) + 1/x until it reaches 10, then the asymptotic
// series is summed.
double digamma(double x);

// ψ′(x) for x > 0, same strategy as digamma(). Always positive.
double trigamma(double x);

// Quantile of the standard normal distribution, 0 < p < 1.
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

struct BracketedRoot {
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
  double residual = 0.0;  // f(root)
  int iterations = 0;
};

inline constexpr int kBisectionMaxIterations = 200;

// Bisection on [lo, hi]. Stops once hi - lo <= tol, once f(mid) == 0, or
// once the midpoint can no longer be separated from an endpoint in floating
// point. Throws Error(kBracket) if f(lo) and f(hi) have the same sign and
// Error(kConvergence) after kBisectionMaxIterations halvings.
BracketedRoot bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol);

}  // namespace gpdqc

#endif  // GPDQC_SPECIAL_MATH_H_
