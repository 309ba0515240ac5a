#include "gpdqc/prior.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "gpdqc/errors.h"
#include "gpdqc/estimators.h"
#include "gpdqc/special_math.h"

namespace gpdqc {
namespace {

[[noreturn]] void infeasible(const std::string& msg) {
  throw Error(ErrorCategory::kInfeasible, msg);
}

// ln(e^x - 1) without overflow for large x.
double log_expm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// -ln(np/k); must be positive for the level to lie above the threshold.
double log_inverse_ratio(const ExcessSample& sample, double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << what << ": probability must lie in (0,1), got " << p;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  const double ratio = exceedance_ratio(sample.n, p, sample.k());
  if (!(ratio < 1.0)) {
    std::ostringstream os;
    os << what << ": np/k = " << ratio << " must be below 1";
    infeasible(os.str());
  }
  return -std::log(ratio);
}

}  // namespace

void validate(const DamslethHyper& h, bool allow_low_delta) {
  if (!(h.delta > 0.0) || !(h.mu > 0.0) || !(h.eta > h.mu) || !std::isfinite(h.delta) ||
      !std::isfinite(h.eta)) {
    std::ostringstream os;
    os << "prior hyperparameters need delta > 0 and eta > mu > 0, got (delta=" << h.delta
       << ", eta=" << h.eta << ", mu=" << h.mu << ")";
    throw Error(ErrorCategory::kValidation, os.str());
  }
  if (!allow_low_delta && !(h.delta > kMinStableDelta)) {
    std::ostringstream os;
    os << "delta = " << h.delta << " <= " << kMinStableDelta
       << " makes the sampler unstable; override explicitly to proceed";
    throw Error(ErrorCategory::kValidation, os.str());
  }
}

PosteriorHyper posterior_update(const DamslethHyper& prior, std::span<const double> z) {
  double sum = 0.0;
  double log_sum = 0.0;
  for (double v : z) {
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "posterior_update: latent values must be positive, got " << v;
      throw Error(ErrorCategory::kDomain, os.str());
    }
    sum += v;
    log_sum += std::log(v);
  }
  const double delta_p = prior.delta + static_cast<double>(z.size());
  return {delta_p, (prior.delta * prior.eta + sum) / delta_p,
          std::exp((prior.delta * std::log(prior.mu) + log_sum) / delta_p)};
}

GammaParams conditional_beta_params(const PosteriorHyper& post, double alpha) {
  return {post.delta * alpha + 1.0, post.delta * post.eta};
}

GammaParams prior_beta_params(const DamslethHyper& prior, double alpha) {
  return {prior.delta * alpha + 1.0, prior.delta * prior.eta};
}

DamslethHyper empirical_hyperparameters(double alpha_hat, double beta_hat) {
  if (!(alpha_hat > 0.0) || !std::isfinite(alpha_hat) || !(beta_hat > 0.0)) {
    std::ostringstream os;
    os << "empirical_hyperparameters: need finite alpha_hat > 0 and beta_hat > 0, got ("
       << alpha_hat << ", " << beta_hat << ")";
    throw Error(ErrorCategory::kDegenerate, os.str());
  }
  const double eta = (alpha_hat + 1.0) / beta_hat;
  return {1.0, eta, eta * std::exp(-2.0 / alpha_hat)};
}

DamslethHyper empirical_hyperparameters(const ExcessSample& sample) {
  const HillEstimate hill = hill_estimate(sample);
  return empirical_hyperparameters(hill.alpha, hill.beta);
}

double mu_for_alpha_mode(double eta, double delta, double alpha_mode) {
  return eta * std::exp(std::log(delta) + digamma(alpha_mode) -
                        digamma(delta * alpha_mode + 1.0));
}

std::pair<double, double> expert_beta_bounds(const ExpertOpinionOneQuantile& op,
                                             const ExcessSample& sample,
                                             double alpha_hat) {
  const double excess = op.q_max - sample.threshold;
  if (!(excess > 0.0)) {
    throw Error(ErrorCategory::kValidation, "expert opinion: q_max must exceed the threshold");
  }
  const double l1 = log_inverse_ratio(sample, op.p1, "expert opinion p1");
  const double l2 = log_inverse_ratio(sample, op.p2, "expert opinion p2");
  return {excess / std::expm1(l1 / alpha_hat), excess / std::expm1(l2 / alpha_hat)};
}

DamslethHyper expert_hyperparameters_one_quantile(const ExpertOpinionOneQuantile& op,
                                                  const ExcessSample& sample) {
  if (!(op.p1 > 0.0 && op.p1 < op.p2 && op.p2 < 1.0)) {
    throw Error(ErrorCategory::kValidation, "expert opinion: need 0 < p1 < p2 < 1");
  }
  if (!(op.epsilon > 0.0 && op.epsilon < 0.5)) {
    throw Error(ErrorCategory::kValidation, "expert opinion: epsilon must lie in (0, 0.5)");
  }
  const double alpha_hat = hill_estimate(sample).alpha;
  const auto [beta1, beta2] = expert_beta_bounds(op, sample, alpha_hat);
  if (!(beta1 > 0.0 && beta1 < beta2)) {
    std::ostringstream os;
    os << "expert opinion: implied bounds beta1 = " << beta1 << ", beta2 = " << beta2
       << " are not ordered";
    infeasible(os.str());
  }
  const double z = normal_quantile(1.0 - op.epsilon / 2.0);
  const double r = (beta1 + beta2) / (beta2 - beta1);
  const double zr2 = z * z * r * r;
  if (!(zr2 > 1.0)) {
    infeasible("expert opinion: bounds too wide for the requested uncertainty (delta <= 0)");
  }
  // Mean ± z·sd of Gamma(δα̂ + 1, δη) matched to (β1, β2).
  const double delta = (zr2 - 1.0) / alpha_hat;
  const double eta = 2.0 * alpha_hat * zr2 / ((beta1 + beta2) * (zr2 - 1.0));
  return {delta, eta, mu_for_alpha_mode(eta, delta, alpha_hat)};
}

TwoQuantileSolution solve_two_quantiles(const ExpertOpinionTwoQuantiles& op,
                                        const ExcessSample& sample) {
  if (op.q_max1 == op.q_max2 || op.p1 == op.p2) {
    throw Error(ErrorCategory::kValidation,
                "expert opinion: the two levels and probabilities must differ");
  }
  const double e1 = op.q_max1 - sample.threshold;
  const double e2 = op.q_max2 - sample.threshold;
  if (!(e1 > 0.0) || !(e2 > 0.0)) {
    throw Error(ErrorCategory::kValidation,
                "expert opinion: both levels must exceed the threshold");
  }
  const double l1 = log_inverse_ratio(sample, op.p1, "expert opinion p1");
  const double l2 = log_inverse_ratio(sample, op.p2, "expert opinion p2");
  const double target = std::log(e1 / e2);
  auto ratio_equation = [&](double alpha) {
    return log_expm1(l1 / alpha) - log_expm1(l2 / alpha) - target;
  };
  BracketedRoot root;
  try {
    root = bisect(ratio_equation, 1e-3, 1e3, 0.0);
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::kBracket) throw;
    infeasible("expert opinion: the two quantile equations have no solution with "
               "alpha in [1e-3, 1e3]");
  }
  const double alpha = root.root;
  return {alpha, e1 / std::expm1(l1 / alpha)};
}

DamslethHyper expert_hyperparameters_two_quantiles(const ExpertOpinionTwoQuantiles& op,
                                                   const ExcessSample& sample) {
  if (!(op.delta > 0.0)) {
    throw Error(ErrorCategory::kValidation, "expert opinion: delta must be positive");
  }
  const TwoQuantileSolution sol = solve_two_quantiles(op, sample);
  const double eta = sol.alpha / sol.beta;
  return {op.delta, eta, mu_for_alpha_mode(eta, op.delta, sol.alpha)};
}

DamslethHyper expert_hyperparameters(const ExpertOpinion& op, const ExcessSample& sample) {
  return std::visit(
      [&sample](const auto& o) -> DamslethHyper {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ExpertOpinionOneQuantile>) {
          return expert_hyperparameters_one_quantile(o, sample);
        } else {
          return expert_hyperparameters_two_quantiles(o, sample);
        }
      },
      op);
}

ExpertOpinion parse_expert_opinion(std::istream& in) {
  std::map<std::string, double> values;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCategory::kValidation,
                  "expert file line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    static const char* const kKeys[] = {"q_max", "q_max1", "q_max2", "p1",
                                        "p2",    "epsilon", "delta"};
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw Error(ErrorCategory::kValidation, "expert file line " + std::to_string(line_no) +
                                                  ": unknown key '" + key + "'");
    }
    const std::string text = trim(line.substr(eq + 1));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw Error(ErrorCategory::kValidation, "expert file line " + std::to_string(line_no) +
                                                  ": '" + text + "' is not a number");
    }
    values[key] = value;
  }
  auto get = [&values](const char* key) {
    const auto it = values.find(key);
    if (it == values.end()) {
      throw Error(ErrorCategory::kValidation, std::string("expert file: missing key ") + key);
    }
    return it->second;
  };
  if (values.count("q_max")) {
    return ExpertOpinionOneQuantile{get("q_max"), get("p1"), get("p2"), get("epsilon")};
  }
  if (values.count("q_max1")) {
    return ExpertOpinionTwoQuantiles{get("q_max1"), get("q_max2"), get("p1"), get("p2"),
                                     get("delta")};
  }
  throw Error(ErrorCategory::kValidation, "expert file: needs q_max or q_max1/q_max2");
}

ExpertOpinion load_expert_opinion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open expert file " + path);
  return parse_expert_opinion(in);
}

}  // namespace gpdqc
