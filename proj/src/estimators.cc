#include "gpdqc/estimators.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "gpdqc/errors.h"

namespace gpdqc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_top_order(std::span<const double> x, std::size_t k, std::size_t min_k,
                     const char* fn) {
  if (k < min_k || k >= x.size()) {
    std::ostringstream os;
    os << fn << ": need " << min_k << " <= k < n, got k = " << k
       << ", n = " << x.size();
    throw Error(ErrorCategory::kValidation, os.str());
  }
  if (!std::is_sorted(x.begin(), x.end())) {
    throw Error(ErrorCategory::kValidation,
                std::string(fn) + ": order statistics must be sorted ascending");
  }
  if (!(x[x.size() - k - 1] > 0.0)) {
    throw Error(ErrorCategory::kDomain,
                std::string(fn) + ": x_{n-k,n} must be positive");
  }
}

// Mean of ln(x_{n-i+1,n} / x_{n-k,n})^r, i = 1..k. Ratios keep the result
// bit-identical under scaling by a power of two.
double log_spacing_moment(std::span<const double> x, std::size_t k, int r) {
  const std::size_t n = x.size();
  const double ref = x[n - k - 1];
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    sum += std::pow(std::log(x[n - i] / ref), r);
  }
  return sum / static_cast<double>(k);
}

double ls_slope(const std::vector<double>& t, const std::vector<double>& v) {
  const double n = static_cast<double>(t.size());
  const double t_mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double v_mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - t_mean) * (v[i] - v_mean);
    sxx += (t[i] - t_mean) * (t[i] - t_mean);
  }
  return sxy / sxx;
}

TailFit not_converged(TailMethod method, std::string note) {
  TailFit fit;
  fit.method = method;
  fit.converged = false;
  fit.gamma = std::numeric_limits<double>::quiet_NaN();
  fit.sigma = std::numeric_limits<double>::quiet_NaN();
  fit.note = std::move(note);
  return fit;
}

// Golden-section maximization of f on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 500; ++it) {
    if (std::abs(b - a) <= rel_tol * (std::abs(a) + std::abs(b)) + 1e-300) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

std::string_view method_name(TailMethod method) {
  switch (method) {
    case TailMethod::kHill: return "Hill";
    case TailMethod::kMl: return "ML";
    case TailMethod::kPwm: return "PWM";
    case TailMethod::kMti: return "MTI";
    case TailMethod::kZipfG: return "ZipfG";
    case TailMethod::kBayesQc: return "BayesQC";
    case TailMethod::kExpBayes: return "ExpBayes";
  }
  return "unknown";
}

TailMethod parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "hill") return TailMethod::kHill;
  if (lower == "ml") return TailMethod::kMl;
  if (lower == "pwm") return TailMethod::kPwm;
  if (lower == "mti") return TailMethod::kMti;
  if (lower == "zipfg") return TailMethod::kZipfG;
  if (lower == "bayesqc" || lower == "bayes") return TailMethod::kBayesQc;
  if (lower == "expbayes") return TailMethod::kExpBayes;
  throw Error(ErrorCategory::kValidation, "unknown method '" + std::string(name) + "'");
}

HillEstimate hill_estimate(std::span<const double> sorted_x, std::size_t k) {
  check_top_order(sorted_x, k, 2, "hill_estimate");
  const double m1 = log_spacing_moment(sorted_x, k, 1);
  if (!(m1 > 0.0)) {
    throw Error(ErrorCategory::kDegenerate,
                "hill_estimate: mean log-spacing is zero (all top order statistics equal)");
  }
  return {1.0 / m1, sorted_x[sorted_x.size() - k - 1]};
}

HillEstimate hill_estimate(const ExcessSample& sample) {
  const auto x = sample.top_order_statistics();
  return hill_estimate(x, sample.k());
}

MomentEstimate mti_dedh_estimate(std::span<const double> sorted_x, std::size_t k) {
  check_top_order(sorted_x, k, 3, "mti_dedh_estimate");
  const double m1 = log_spacing_moment(sorted_x, k, 1);
  const double m2 = log_spacing_moment(sorted_x, k, 2);
  const double gamma = moment_gamma(m1, m2);
  const double gamma_minus = gamma - m1;
  const double u = sorted_x[sorted_x.size() - k - 1];
  return {gamma, u * m1 * (1.0 - gamma_minus)};
}

double moment_gamma(double m1, double m2) {
  if (!(m2 > 0.0) || m1 * m1 == m2) {
    throw Error(ErrorCategory::kDegenerate,
                "mti_dedh_estimate: degenerate log-spacing moments");
  }
  return m1 + 1.0 - 0.5 / (1.0 - m1 * m1 / m2);
}

double zipf_estimate(std::span<const double> sorted_x, std::size_t k) {
  check_top_order(sorted_x, k, 3, "zipf_estimate");
  const std::size_t n = sorted_x.size();
  const double u = sorted_x[n - k - 1];
  std::vector<double> t(k), v(k);
  for (std::size_t i = 1; i <= k; ++i) {
    t[i - 1] = std::log(static_cast<double>(k + 1) / static_cast<double>(i));
    v[i - 1] = std::log(sorted_x[n - i] / u);
  }
  if (sorted_x[n - 1] == sorted_x[n - k]) {
    throw Error(ErrorCategory::kDegenerate, "zipf_estimate: constant data");
  }
  return ls_slope(t, v);
}

double zipf_g_estimate(std::span<const double> sorted_x, std::size_t k) {
  check_top_order(sorted_x, k, 3, "zipf_g_estimate");
  const std::size_t n = sorted_x.size();
  // Points of the generalized quantile plot, ln(UH_j) with
  // UH_j = x_{n-j,n} H_j, taken relative to ln u = ln x_{n-k,n}.
  const double u = sorted_x[n - k - 1];
  std::vector<double> t(k), v(k), log_top(k);
  for (std::size_t i = 1; i <= k; ++i) log_top[i - 1] = std::log(sorted_x[n - i] / u);
  double log_sum = 0.0;  // Σ_{i<=j} ln(x_{n-i+1,n}/u)
  for (std::size_t j = 1; j <= k; ++j) {
    log_sum += log_top[j - 1];
    const double log_ref = std::log(sorted_x[n - j - 1] / u);
    const double hill = log_sum / static_cast<double>(j) - log_ref;
    if (!(hill > 0.0)) {
      throw Error(ErrorCategory::kDegenerate,
                  "zipf_g_estimate: tied order statistics give a zero Hill statistic");
    }
    t[j - 1] = std::log(static_cast<double>(k + 1) / static_cast<double>(j));
    v[j - 1] = log_ref + std::log(hill);
  }
  return ls_slope(t, v);
}

double gpd_profile_log_likelihood(std::span<const double> y, double tau) {
  const double k = static_cast<double>(y.size());
  if (tau == 0.0) {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / k;
    return -k * (std::log(mean) + 1.0);
  }
  double sum = 0.0;
  for (double v : y) {
    const double arg = tau * v;
    if (!(arg > -1.0)) return kNegInf;
    sum += std::log1p(arg);
  }
  const double gamma = sum / k;
  const double sigma = gamma / tau;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return kNegInf;
  return -k * (std::log(sigma) + 1.0 + gamma);
}

TailFit ml_gpd_fit(std::span<const double> y) {
  if (y.size() < 2) return not_converged(TailMethod::kMl, "need at least 2 excesses");
  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  const double y_max = *max_it;
  if (!(*min_it >= 0.0)) return not_converged(TailMethod::kMl, "negative excess");
  if (*min_it == y_max) {
    return not_converged(TailMethod::kMl, "all excesses equal: likelihood has no maximum");
  }

  // Grid in τ: log-spaced on both sides of 0 (dense near 0 so the
  // exponential case is resolved) with τ = 0 in the middle.
  constexpr int kNegative = 100;
  constexpr int kPositive = 300;
  std::vector<double> taus;
  taus.reserve(kNegative + kPositive + 1);
  const double lo_s = std::log(1e-6), hi_neg = std::log(1.0 - 1e-6);
  for (int i = 0; i < kNegative; ++i) {
    const double s = std::exp(hi_neg + (lo_s - hi_neg) * i / (kNegative - 1));
    taus.push_back(-s / y_max);
  }
  taus.push_back(0.0);
  const double hi_pos = std::log(1e9);
  for (int i = 0; i < kPositive; ++i) {
    const double s = std::exp(lo_s + (hi_pos - lo_s) * i / (kPositive - 1));
    taus.push_back(s / y_max);
  }
  std::vector<double> ll(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    ll[i] = gpd_profile_log_likelihood(y, taus[i]);
  }

  // The profile diverges as τ -> -1/max(y); only interior local maxima count.
  std::size_t best = 0;
  double best_ll = kNegInf;
  for (std::size_t i = 1; i + 1 < taus.size(); ++i) {
    if (std::isfinite(ll[i]) && ll[i] >= ll[i - 1] && ll[i] >= ll[i + 1] &&
        ll[i] > best_ll) {
      best = i;
      best_ll = ll[i];
    }
  }
  if (best == 0) {
    return not_converged(TailMethod::kMl, "profile likelihood has no interior maximum");
  }

  auto profile = [&](double tau) { return gpd_profile_log_likelihood(y, tau); };
  double tau = golden_max(profile, taus[best - 1], taus[best + 1], 1e-10);
  if (profile(tau) < best_ll) tau = taus[best];

  TailFit fit;
  fit.method = TailMethod::kMl;
  if (tau == 0.0) {
    fit.gamma = 0.0;
    fit.sigma = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  } else {
    double sum = 0.0;
    for (double v : y) sum += std::log1p(tau * v);
    fit.gamma = sum / static_cast<double>(y.size());
    fit.sigma = fit.gamma / tau;
  }
  fit.converged = std::isfinite(fit.gamma) && fit.sigma > 0.0 && std::isfinite(fit.sigma);
  if (!fit.converged) fit.note = "refinement produced an invalid scale";
  return fit;
}

TailFit ml_gpd_fit(const ExcessSample& sample) { return ml_gpd_fit(sample.excesses); }

TailFit pwm_gpd_fit(std::span<const double> y) {
  const std::size_t k = y.size();
  if (k < 2) throw Error(ErrorCategory::kValidation, "pwm_gpd_fit: need k >= 2");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0, a1 = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    mean += sorted[j - 1];
    // Weight is the plotting-position estimate of the survival probability.
    a1 += static_cast<double>(k - j) / static_cast<double>(k - 1) * sorted[j - 1];
  }
  mean /= static_cast<double>(k);
  a1 /= static_cast<double>(k);
  const double denom = mean - 2.0 * a1;
  if (denom == 0.0) {
    throw Error(ErrorCategory::kDegenerate, "pwm_gpd_fit: mean equals twice the PWM");
  }
  TailFit fit;
  fit.method = TailMethod::kPwm;
  fit.gamma = 2.0 - mean / denom;
  fit.sigma = 2.0 * mean * a1 / denom;
  fit.converged = fit.sigma > 0.0;
  if (!fit.converged) {
    fit.note = "non-positive scale";
  } else if (!(fit.gamma > -0.4 && fit.gamma < 0.4)) {
    fit.note = "shape outside (-0.4, 0.4) where PWM is reliable";
  }
  return fit;
}

TailFit pwm_gpd_fit(const ExcessSample& sample) { return pwm_gpd_fit(sample.excesses); }

TailFit fit_tail(TailMethod method, const ExcessSample& sample) {
  switch (method) {
    case TailMethod::kMl:
      return ml_gpd_fit(sample);
    case TailMethod::kPwm:
      return pwm_gpd_fit(sample);
    case TailMethod::kHill:
    case TailMethod::kMti:
    case TailMethod::kZipfG: {
      const auto x = sample.top_order_statistics();
      TailFit fit;
      fit.method = method;
      if (method == TailMethod::kMti) {
        const MomentEstimate m = mti_dedh_estimate(x, sample.k());
        fit.gamma = m.gamma;
        fit.sigma = m.sigma;
      } else {
        fit.gamma = method == TailMethod::kHill ? 1.0 / hill_estimate(x, sample.k()).alpha
                                                : zipf_g_estimate(x, sample.k());
        fit.sigma = fit.gamma * sample.threshold;
      }
      fit.converged = fit.sigma > 0.0 && std::isfinite(fit.gamma);
      if (!fit.converged) fit.note = "non-positive scale";
      return fit;
    }
    case TailMethod::kBayesQc:
    case TailMethod::kExpBayes:
      break;
  }
  throw Error(ErrorCategory::kValidation,
              "fit_tail: " + std::string(method_name(method)) + " is not a point estimator");
}

ExpBayesQuantiles exp_bayes_quantiles(const ExcessSample& sample, double a, double b,
                                      double p) {
  sample.validate();
  if (!(a > 0.0) || !(b >= 0.0)) {
    throw Error(ErrorCategory::kDomain, "exp_bayes_quantiles: need a > 0 and b >= 0");
  }
  const double k = static_cast<double>(sample.k());
  const double ratio = exceedance_ratio(sample.n, p, sample.k());
  const double np = ratio * k;
  if (!(p > 0.0 && p < 1.0) || ratio > 1.0) {
    std::ostringstream os;
    os << "exp_bayes_quantiles: need 0 < np <= k (np = " << np << ", k = " << k
       << "); lower the threshold";
    throw Error(ErrorCategory::kDomain, os.str());
  }
  if (!(a + k > 1.0)) {
    throw Error(ErrorCategory::kDomain, "exp_bayes_quantiles: need a + k > 1");
  }
  const double s_k = std::accumulate(sample.excesses.begin(), sample.excesses.end(), 0.0);
  const double shape = a + k;
  const double rate = b + s_k;
  const double log_ratio = -std::log(ratio);
  const double u = sample.threshold;
  return {u + rate / shape * log_ratio,
          u + rate * std::expm1(log_ratio / shape),
          u + rate / (shape - 1.0) * log_ratio,
          shape,
          rate,
          GpdParams::from_alpha_beta(shape, rate)};
}

}  // namespace gpdqc
