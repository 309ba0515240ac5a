#ifndef GPDQC_BENCH_H_
#define GPDQC_BENCH_H_

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "gpdqc/estimators.h"
#include "gpdqc/gibbs.h"
#include "gpdqc/rng.h"

namespace gpdqc {

// Test distributions of the coverage study; all have tail index γ = 1.
enum class BenchDistribution {
  kFrechet1,     // Fréchet(1), ρ = -1
  kBurr1052,     // Burr(1, 0.5, 2), ρ = -0.5
  kLogGamma2,    // exp(Gamma(2, 1)), ρ = 0
};

std::string_view distribution_name(BenchDistribution dist);
// "frechet", "burr" or "loggamma".
BenchDistribution parse_distribution(std::string_view name);

double true_gamma(BenchDistribution dist);
// Second-order parameter; reported as metadata, never estimated.
double second_order_rho(BenchDistribution dist);

// q_{1-p} of the generating distribution, i.e. F(q) = 1 - p.
double true_quantile(BenchDistribution dist, double p);

double draw(BenchDistribution dist, RngStream& rng);
std::vector<double> simulate(BenchDistribution dist, std::size_t n, RngStream& rng);

struct BenchDesign {
  BenchDistribution distribution = BenchDistribution::kFrechet1;
  int n = 500;
  int replications = 100;
  std::vector<int> k_grid;
  double p = 1.0 / 5000.0;
  double level = 0.9;
  // Iterations, burn-in and δ override are taken from here; the seed,
  // stream and hyperparameters are set per cell.
  ChainConfig chain;
  std::uint64_t seed = 0;
  bool include_pwm = false;
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;

  // 100 replications, k = 5, 10, ..., 495.
  static BenchDesign full(BenchDistribution dist);
  // 20 replications, k in {25, 50, 100, 200}.
  static BenchDesign scaled(BenchDistribution dist);

  void validate() const;
};

// Aggregates over replications for one (k, estimator) cell.
struct CellStats {
  int k = 0;
  TailMethod method = TailMethod::kBayesQc;
  std::size_t valid = 0;  // replications where the estimator produced a value
  double mean_gamma = 0.0;
  double mean_q = 0.0;
  // 90% Monte-Carlo confidence intervals: empirical 0.05 / 0.95 quantiles
  // of the estimates across replications.
  double mcci_gamma_lo = 0.0;
  double mcci_gamma_hi = 0.0;
  double mcci_q_lo = 0.0;
  double mcci_q_hi = 0.0;

  double mcci_q_width() const { return mcci_q_hi - mcci_q_lo; }
};

struct CoverageStats {
  int k = 0;
  std::size_t valid = 0;
  std::size_t covered_gamma = 0;
  std::size_t covered_q = 0;
  // Credibility interval endpoints averaged over replications.
  double mean_ci_gamma_lo = 0.0;
  double mean_ci_gamma_hi = 0.0;
  double mean_ci_q_lo = 0.0;
  double mean_ci_q_hi = 0.0;
};

struct BenchReport {
  BenchDistribution distribution = BenchDistribution::kFrechet1;
  int n = 0;
  int replications = 0;
  double p = 0.0;
  double level = 0.0;
  double true_gamma = 0.0;
  double true_q = 0.0;
  double rho = 0.0;
  std::vector<int> k_grid;
  std::vector<TailMethod> estimators;
  // One entry per (k, estimator), k-major.
  std::vector<CellStats> cells;
  // One entry per k, Bayes-QC credibility intervals.
  std::vector<CoverageStats> coverage;
  // Per-replication estimates [k index][estimator index][replication];
  // NaN marks a missing value (e.g. ML did not converge).
  std::vector<std::vector<std::vector<double>>> gamma_estimates;
  std::vector<std::vector<std::vector<double>>> q_estimates;

  const CellStats& cell(int k, TailMethod method) const;
};

// Runs every estimator on every (replication, k) cell. Replication r draws
// its data from stream (seed, r << 32) and the chain for cell (r, k) uses
// stream (seed, (r << 32) | k), so cells never perturb one another.
// Estimator failures become missing values.
BenchReport run_bench(const BenchDesign& design);

enum class FigureKind {
  kMeans,      // k, gamma_<method>..., q_<method>...
  kCoverage,   // k, coverage_gamma, coverage_q
  kWidth,      // k, width_<method>...
  kIntervals,  // k, bayes_ci_lo, bayes_ci_hi, mcci_lo, mcci_hi
};

std::string_view figure_name(FigureKind kind);
FigureKind parse_figure(std::string_view name);

// Tab-separated table with a header row. Missing values are written as NA.
void emit_figure_data(const BenchReport& report, FigureKind kind, std::ostream& out);

}  // namespace gpdqc

#endif  // GPDQC_BENCH_H_
