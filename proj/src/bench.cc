#include "gpdqc/bench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "gpdqc/errors.h"
#include "gpdqc/pot.h"
#include "gpdqc/prior.h"
#include "gpdqc/special_math.h"

namespace gpdqc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t data_stream(int replication) {
  return static_cast<std::uint64_t>(replication) << 32;
}

std::uint64_t chain_stream(int replication, int k) {
  return data_stream(replication) | static_cast<std::uint32_t>(k);
}

// Mean and 5%/95% quantiles over the non-NaN entries.
struct Spread {
  std::size_t valid = 0;
  double mean = kNaN;
  double lo = kNaN;
  double hi = kNaN;
};

Spread spread(const std::vector<double>& values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  Spread s;
  s.valid = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  s.lo = empirical_quantile(v, 0.05);
  s.hi = empirical_quantile(v, 0.95);
  return s;
}

struct BayesCell {
  double gamma = kNaN;
  double q = kNaN;
  double ci_gamma_lo = kNaN, ci_gamma_hi = kNaN;
  double ci_q_lo = kNaN, ci_q_hi = kNaN;
};

void write_value(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "NA";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out << buf;
}

}  // namespace

std::string_view distribution_name(BenchDistribution dist) {
  switch (dist) {
    case BenchDistribution::kFrechet1: return "frechet";
    case BenchDistribution::kBurr1052: return "burr";
    case BenchDistribution::kLogGamma2: return "loggamma";
  }
  return "unknown";
}

BenchDistribution parse_distribution(std::string_view name) {
  if (name == "frechet") return BenchDistribution::kFrechet1;
  if (name == "burr") return BenchDistribution::kBurr1052;
  if (name == "loggamma") return BenchDistribution::kLogGamma2;
  throw Error(ErrorCategory::kValidation, "unknown distribution '" + std::string(name) + "'");
}

double true_gamma(BenchDistribution) { return 1.0; }

double second_order_rho(BenchDistribution dist) {
  switch (dist) {
    case BenchDistribution::kFrechet1: return -1.0;
    case BenchDistribution::kBurr1052: return -0.5;
    case BenchDistribution::kLogGamma2: return 0.0;
  }
  return kNaN;
}

double true_quantile(BenchDistribution dist, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCategory::kDomain, "true_quantile: p must lie in (0,1)");
  }
  switch (dist) {
    case BenchDistribution::kFrechet1:
      return -1.0 / std::log1p(-p);
    case BenchDistribution::kBurr1052: {
      const double root = std::pow(p, -0.5) - 1.0;
      return root * root;
    }
    case BenchDistribution::kLogGamma2: {
      // Gamma(2, 1) survival e^(-g)(1 + g) = p, solved in logs.
      const double log_p = std::log(p);
      auto f = [log_p](double g) { return -g + std::log1p(g) - log_p; };
      return std::exp(bisect(f, 0.0, 1e4, 1e-13).root);
    }
  }
  return kNaN;
}

double draw(BenchDistribution dist, RngStream& rng) {
  switch (dist) {
    case BenchDistribution::kFrechet1: return frechet_sample(1.0, rng);
    case BenchDistribution::kBurr1052: return burr_sample(1.0, 0.5, 2.0, rng);
    case BenchDistribution::kLogGamma2: return loggamma_sample(rng);
  }
  return kNaN;
}

std::vector<double> simulate(BenchDistribution dist, std::size_t n, RngStream& rng) {
  std::vector<double> out(n);
  for (double& v : out) v = draw(dist, rng);
  return out;
}

BenchDesign BenchDesign::full(BenchDistribution dist) {
  BenchDesign d;
  d.distribution = dist;
  for (int k = 5; k <= 495; k += 5) d.k_grid.push_back(k);
  return d;
}

BenchDesign BenchDesign::scaled(BenchDistribution dist) {
  BenchDesign d;
  d.distribution = dist;
  d.replications = 20;
  d.k_grid = {25, 50, 100, 200};
  return d;
}

void BenchDesign::validate() const {
  if (replications < 1) throw Error(ErrorCategory::kValidation, "need at least 1 replication");
  if (k_grid.empty()) throw Error(ErrorCategory::kValidation, "empty k grid");
  for (int k : k_grid) {
    if (k < 3 || k >= n) {
      std::ostringstream os;
      os << "k = " << k << " must satisfy 3 <= k < n = " << n;
      throw Error(ErrorCategory::kValidation, os.str());
    }
  }
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCategory::kValidation, "p must lie in (0,1)");
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCategory::kValidation, "level must lie in (0,1)");
  }
  if (chain.total_iterations < 1 || chain.burn_in < 0 ||
      chain.burn_in >= chain.total_iterations) {
    throw Error(ErrorCategory::kValidation, "invalid chain length or burn-in");
  }
}

const CellStats& BenchReport::cell(int k, TailMethod method) const {
  for (const auto& c : cells) {
    if (c.k == k && c.method == method) return c;
  }
  throw Error(ErrorCategory::kValidation, "no bench cell for the requested k and method");
}

BenchReport run_bench(const BenchDesign& design) {
  design.validate();
  BenchReport report;
  report.distribution = design.distribution;
  report.n = design.n;
  report.replications = design.replications;
  report.p = design.p;
  report.level = design.level;
  report.true_gamma = true_gamma(design.distribution);
  report.true_q = true_quantile(design.distribution, design.p);
  report.rho = second_order_rho(design.distribution);
  report.k_grid = design.k_grid;
  report.estimators = {TailMethod::kBayesQc, TailMethod::kMl, TailMethod::kMti,
                       TailMethod::kZipfG};
  if (design.include_pwm) report.estimators.push_back(TailMethod::kPwm);

  const std::size_t n_k = design.k_grid.size();
  const std::size_t n_est = report.estimators.size();
  const auto n_rep = static_cast<std::size_t>(design.replications);
  report.gamma_estimates.assign(
      n_k, std::vector<std::vector<double>>(n_est, std::vector<double>(n_rep, kNaN)));
  report.q_estimates = report.gamma_estimates;
  std::vector<std::vector<BayesCell>> bayes(n_k, std::vector<BayesCell>(n_rep));

  auto run_replication = [&](int rep) {
    RngStream data_rng(design.seed, data_stream(rep));
    const std::vector<double> x =
        simulate(design.distribution, static_cast<std::size_t>(design.n), data_rng);
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      const int k = design.k_grid[ki];
      const ExcessSample sample = extract_excesses(x, static_cast<std::size_t>(k));
      const QuantileRequest req = quantile_request(sample, design.p);
      for (std::size_t e = 0; e < n_est; ++e) {
        const TailMethod method = report.estimators[e];
        double g = kNaN, q = kNaN;
        try {
          if (method == TailMethod::kBayesQc) {
            ChainConfig cfg = design.chain;
            cfg.seed = design.seed;
            cfg.stream_id = chain_stream(rep, k);
            cfg.hyper = empirical_hyperparameters(sample);
            cfg.initial_alpha.reset();
            cfg.initial_beta.reset();
            const ChainOutput chain = run_chain(sample, cfg);
            const PosteriorSummary gs = summarize(chain.gammas(), design.level);
            const PosteriorSummary qs =
                summarize(posterior_quantile_draws(chain, req), design.level);
            g = gs.median;
            q = qs.median;
            bayes[ki][static_cast<std::size_t>(rep)] = {gs.median, qs.median, gs.ci_lo,
                                                        gs.ci_hi, qs.ci_lo, qs.ci_hi};
          } else {
            const TailFit fit = fit_tail(method, sample);
            if (fit.converged) {
              g = fit.gamma;
              q = pot_quantile(fit, req);
            }
          }
        } catch (const Error&) {
          // Missing cell; aggregation skips NaN.
        }
        report.gamma_estimates[ki][e][static_cast<std::size_t>(rep)] = g;
        report.q_estimates[ki][e][static_cast<std::size_t>(rep)] = q;
      }
    }
  };

  unsigned threads = design.threads == 0 ? std::thread::hardware_concurrency() : design.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_rep)));
  if (threads == 1) {
    for (int rep = 0; rep < design.replications; ++rep) run_replication(rep);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int rep = next++; rep < design.replications; rep = next++) {
          try {
            run_replication(rep);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t ki = 0; ki < n_k; ++ki) {
    const int k = design.k_grid[ki];
    for (std::size_t e = 0; e < n_est; ++e) {
      const Spread sg = spread(report.gamma_estimates[ki][e]);
      const Spread sq = spread(report.q_estimates[ki][e]);
      CellStats c;
      c.k = k;
      c.method = report.estimators[e];
      c.valid = std::min(sg.valid, sq.valid);
      c.mean_gamma = sg.mean;
      c.mean_q = sq.mean;
      c.mcci_gamma_lo = sg.lo;
      c.mcci_gamma_hi = sg.hi;
      c.mcci_q_lo = sq.lo;
      c.mcci_q_hi = sq.hi;
      report.cells.push_back(c);
    }
    CoverageStats cov;
    cov.k = k;
    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (const BayesCell& b : bayes[ki]) {
      if (std::isnan(b.gamma)) continue;
      ++cov.valid;
      if (b.ci_gamma_lo <= report.true_gamma && report.true_gamma <= b.ci_gamma_hi) {
        ++cov.covered_gamma;
      }
      if (b.ci_q_lo <= report.true_q && report.true_q <= b.ci_q_hi) ++cov.covered_q;
      sums[0] += b.ci_gamma_lo;
      sums[1] += b.ci_gamma_hi;
      sums[2] += b.ci_q_lo;
      sums[3] += b.ci_q_hi;
    }
    const double denom = cov.valid ? static_cast<double>(cov.valid) : kNaN;
    cov.mean_ci_gamma_lo = sums[0] / denom;
    cov.mean_ci_gamma_hi = sums[1] / denom;
    cov.mean_ci_q_lo = sums[2] / denom;
    cov.mean_ci_q_hi = sums[3] / denom;
    report.coverage.push_back(cov);
  }
  return report;
}

std::string_view figure_name(FigureKind kind) {
  switch (kind) {
    case FigureKind::kMeans: return "means";
    case FigureKind::kCoverage: return "coverage";
    case FigureKind::kWidth: return "width";
    case FigureKind::kIntervals: return "intervals";
  }
  return "unknown";
}

FigureKind parse_figure(std::string_view name) {
  if (name == "means") return FigureKind::kMeans;
  if (name == "coverage") return FigureKind::kCoverage;
  if (name == "width") return FigureKind::kWidth;
  if (name == "intervals") return FigureKind::kIntervals;
  throw Error(ErrorCategory::kValidation, "unknown figure '" + std::string(name) + "'");
}

void emit_figure_data(const BenchReport& report, FigureKind kind, std::ostream& out) {
  out << "k";
  switch (kind) {
    case FigureKind::kMeans:
      for (TailMethod m : report.estimators) out << "\tgamma_" << method_name(m);
      for (TailMethod m : report.estimators) out << "\tq_" << method_name(m);
      break;
    case FigureKind::kCoverage:
      out << "\tcoverage_gamma\tcoverage_q";
      break;
    case FigureKind::kWidth:
      for (TailMethod m : report.estimators) out << "\twidth_" << method_name(m);
      break;
    case FigureKind::kIntervals:
      out << "\tbayes_ci_lo\tbayes_ci_hi\tmcci_lo\tmcci_hi";
      break;
  }
  out << '\n';
  for (std::size_t ki = 0; ki < report.k_grid.size(); ++ki) {
    const int k = report.k_grid[ki];
    out << k;
    auto col = [&out](double v) {
      out << '\t';
      write_value(out, v);
    };
    const CoverageStats& cov = report.coverage[ki];
    switch (kind) {
      case FigureKind::kMeans:
        for (TailMethod m : report.estimators) col(report.cell(k, m).mean_gamma);
        for (TailMethod m : report.estimators) col(report.cell(k, m).mean_q);
        break;
      case FigureKind::kCoverage: {
        const double denom = cov.valid ? static_cast<double>(cov.valid) : kNaN;
        col(static_cast<double>(cov.covered_gamma) / denom);
        col(static_cast<double>(cov.covered_q) / denom);
        break;
      }
      case FigureKind::kWidth:
        for (TailMethod m : report.estimators) col(report.cell(k, m).mcci_q_width());
        break;
      case FigureKind::kIntervals: {
        const CellStats& c = report.cell(k, TailMethod::kBayesQc);
        col(cov.mean_ci_q_lo);
        col(cov.mean_ci_q_hi);
        col(c.mcci_q_lo);
        col(c.mcci_q_hi);
        break;
      }
    }
    out << '\n';
  }
}

}  // namespace gpdqc
