#ifndef GPDQC_TOOLS_COMMANDS_H_
#define GPDQC_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gpdqc/bench.h"
#include "gpdqc/estimators.h"
#include "gpdqc/pot.h"
#include "gpdqc/prior.h"
#include "json.hpp"

namespace gpdqc::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kFitSchema = "gpdqc.fit.v1";
inline constexpr std::uint64_t kDefaultSeed = 20240101;

// Defaults for chain length and seed, overridable through GPDQC_ITERATIONS,
// GPDQC_BURN_IN and GPDQC_SEED. Throws Error(kValidation) on a malformed value.
struct RunDefaults {
  int iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = kDefaultSeed;
};
RunDefaults run_defaults_from_env();

struct FitOptions {
  std::optional<std::string> input;
  std::optional<std::string> dataset;
  // The input holds excesses already; n and threshold must then be given.
  bool excesses_input = false;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::optional<double> threshold;
  std::optional<double> years;
  // Empty selects Bayes-QC plus every frequentist comparator.
  std::vector<std::string> methods;
  std::vector<double> probabilities;
  std::vector<double> return_periods;
  bool premium = false;
  int iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = kDefaultSeed;
  double level = 0.9;
  std::optional<std::string> expert_file;
  double exp_a = 1.0;
  double exp_b = 0.0;
  bool timestamp = true;
};

struct MethodReport {
  TailMethod method = TailMethod::kMl;
  std::optional<TailFit> fit;
  std::string error;  // set when the estimator failed
  std::vector<std::pair<double, double>> quantiles;       // (p, q)
  std::vector<std::pair<double, double>> return_levels;   // (N, level)
  std::optional<double> premium;
};

struct BayesReport {
  DamslethHyper hyper;
  std::string prior;  // "empirical" or "expert"
  int iterations = 0;
  int burn_in = 0;
  std::uint64_t stream_id = 0;
  std::size_t retained = 0;
  double acceptance_rate = 0.0;
  PosteriorSummary gamma;
  PosteriorSummary sigma;
  std::vector<std::pair<double, PosteriorSummary>> quantiles;
  std::vector<std::pair<double, PosteriorSummary>> return_levels;
  std::optional<PremiumSummary> premium;
};

struct ExpBayesRow {
  double p;
  ExpBayesQuantiles q;
};

struct ExpBayesReport {
  double a = 0.0;
  double b = 0.0;
  std::vector<ExpBayesRow> rows;
};

struct RunReport {
  std::string version = kVersion;
  std::string source;
  std::size_t n = 0;
  std::size_t k = 0;
  double threshold = 0.0;
  std::optional<double> years;
  std::uint64_t seed = 0;
  double level = 0.0;
  std::vector<MethodReport> methods;
  std::optional<BayesReport> bayes;
  std::optional<ExpBayesReport> exp_bayes;
  std::optional<std::string> timestamp;

  const MethodReport* method(TailMethod m) const;
};

// Loads the data, builds the excess sample and runs every requested
// method. Comparator failures are recorded in the report; data, prior and
// chain failures throw Error.
RunReport cmd_fit(const FitOptions& opts);

nlohmann::ordered_json to_json(const RunReport& report);
void write_text(const RunReport& report, std::ostream& out);

struct BenchOptions {
  std::string distribution = "frechet";
  std::string profile = "scaled";  // "scaled" or "full"
  std::optional<int> replications;
  std::optional<std::vector<int>> k_grid;
  std::optional<int> n;
  std::optional<double> p;
  int iterations = 1000;
  int burn_in = 500;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  bool include_pwm = false;
  // Directory receiving <dist>_<figure>.tsv; nothing is written when empty.
  std::string out_dir;
};

BenchDesign bench_design(const BenchOptions& opts);
// Runs the study, writes the figure tables and a summary to out.
BenchReport cmd_bench(const BenchOptions& opts, std::ostream& out);
void write_bench_summary(const BenchReport& report, std::ostream& out);

struct SimulateOptions {
  std::string distribution = "frechet";
  std::size_t n = 500;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t stream_id = 0;
};

// One value per line, 17 significant digits.
void cmd_simulate(const SimulateOptions& opts, std::ostream& out);

}  // namespace gpdqc::cli

#endif  // GPDQC_TOOLS_COMMANDS_H_
