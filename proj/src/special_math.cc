#include "gpdqc/special_math.h"

#include <cmath>
#include <sstream>

#include "gpdqc/errors.h"

namespace gpdqc {
namespace {

constexpr double kAsymptoticThreshold = 10.0;

void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << fn << ": argument must be positive and finite, got " << x;
    throw Error(ErrorCategory::kDomain, os.str());
  }
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  return std::lgamma(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number series: -1/(12x^2) + 1/(120x^4) - ... up to x^-14.
  const double series =
      inv2 * (-1.0 / 12.0 +
              inv2 * (1.0 / 120.0 +
                      inv2 * (-1.0 / 252.0 +
                              inv2 * (1.0 / 240.0 +
                                      inv2 * (-1.0 / 132.0 +
                                              inv2 * (691.0 / 32760.0 +
                                                      inv2 * (-1.0 / 12.0)))))));
  return shift + std::log(x) - 0.5 * inv + series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 +
             inv * (0.5 +
                    inv * (1.0 / 6.0 +
                           inv2 * (-1.0 / 30.0 +
                                   inv2 * (1.0 / 42.0 +
                                           inv2 * (-1.0 / 30.0 +
                                                   inv2 * (5.0 / 66.0 +
                                                           inv2 * (-691.0 / 2730.0 +
                                                                   inv2 * (7.0 / 6.0)))))))));
  return shift + series;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "normal_quantile: probability must lie in (0,1), got " << p;
    throw Error(ErrorCategory::kDomain, os.str());
  }
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

BracketedRoot bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol) {
  if (!(lo < hi) || !(tol >= 0.0)) {
    std::ostringstream os;
    os << "bisect: need lo < hi and tol >= 0, got [" << lo << ", " << hi
       << "], tol " << tol;
    throw Error(ErrorCategory::kDomain, os.str());
  }
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) {
    throw Error(ErrorCategory::kDomain, "bisect: function is NaN at a bracket end");
  }
  if (f_lo == 0.0) return {lo, hi, lo, 0.0, 0};
  if (f_hi == 0.0) return {lo, hi, hi, 0.0, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os << "bisect: no sign change on [" << lo << ", " << hi << "] (f(lo)=" << f_lo
       << ", f(hi)=" << f_hi << ")";
    throw Error(ErrorCategory::kBracket, os.str());
  }
  for (int it = 1; it <= kBisectionMaxIterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {lo, hi, mid, 0.0, it};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    const double next = lo + 0.5 * (hi - lo);
    if (hi - lo <= tol || next <= lo || next >= hi) {
      return {lo, hi, next, f(next), it};
    }
  }
  throw Error(ErrorCategory::kConvergence,
              "bisect: no convergence after 200 halvings");
}

}  // namespace gpdqc
