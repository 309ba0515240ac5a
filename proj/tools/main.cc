#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "gpdqc/errors.h"

namespace {

int report_error(const gpdqc::Error& e) {
  std::cerr << "error[" << gpdqc::category_name(e.category()) << "]: " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gpdqc::cli;

  RunDefaults defaults;
  try {
    defaults = run_defaults_from_env();
  } catch (const gpdqc::Error& e) {
    return report_error(e);
  }

  CLI::App app{"Quasi-conjugate Bayes and classical estimation of GPD tails"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitOptions fit;
  fit.iterations = defaults.iterations;
  fit.burn_in = defaults.burn_in;
  fit.seed = defaults.seed;
  std::string fit_format = "text";
  std::string fit_output;
  bool no_timestamp = false;
  std::size_t k = 0, n = 0;
  double threshold = 0.0, years = 0.0;

  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the tail of a sample");
  auto* input_opt = fit_cmd->add_option("--input", fit.input, "Data file, one value per line");
  auto* dataset_opt = fit_cmd->add_option("--dataset", fit.dataset, "Built-in dataset (fire)");
  input_opt->excludes(dataset_opt);
  fit_cmd->add_flag("--excesses", fit.excesses_input,
                    "Input values are excesses over --threshold; needs --n");
  auto* n_opt = fit_cmd->add_option("--n", n, "Total sample size behind the excesses");
  auto* k_opt = fit_cmd->add_option("--k", k, "Number of upper order statistics");
  auto* u_opt = fit_cmd->add_option("--threshold,-u", threshold, "Threshold u");
  auto* years_opt = fit_cmd->add_option("--years", years, "Observation period T in years");
  fit_cmd->add_option("--method,-m", fit.methods,
                      "bayes, ml, pwm, mti, zipfg, hill, expbayes (repeatable)");
  fit_cmd->add_option("--p,--quantile-p", fit.probabilities,
                      "Exceedance probability of a requested quantile (repeatable)");
  fit_cmd->add_option("--return-period", fit.return_periods, "N-year return level (repeatable)");
  fit_cmd->add_flag("--premium", fit.premium, "Report the net premium");
  fit_cmd->add_option("--iterations", fit.iterations, "Gibbs iterations")->capture_default_str();
  fit_cmd->add_option("--burn-in", fit.burn_in, "Discarded iterations")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "RNG seed")->capture_default_str();
  fit_cmd->add_option("--level", fit.level, "Credibility level")->capture_default_str();
  fit_cmd->add_option("--expert-file", fit.expert_file, "Expert opinion key = value file");
  fit_cmd->add_option("--exp-prior-a", fit.exp_a, "ExpBayes Gamma prior shape")
      ->capture_default_str();
  fit_cmd->add_option("--exp-prior-b", fit.exp_b, "ExpBayes Gamma prior rate")
      ->capture_default_str();
  fit_cmd->add_option("--format", fit_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  fit_cmd->add_option("--output,-o", fit_output, "Write the report here instead of stdout");
  fit_cmd->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for byte-stable replay");
  fit_cmd->callback([&] {
    if (k_opt->count()) fit.k = k;
    if (n_opt->count()) fit.n = n;
    if (u_opt->count()) fit.threshold = threshold;
    if (years_opt->count()) fit.years = years;
    fit.timestamp = !no_timestamp;
  });

  BenchOptions bench;
  bench.iterations = defaults.iterations;
  bench.burn_in = defaults.burn_in;
  bench.seed = defaults.seed;
  int replications = 0, bench_n = 0;
  std::vector<int> k_grid;
  double bench_p = 0.0;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Monte Carlo coverage study");
  bench_cmd->add_option("--dist", bench.distribution, "frechet, burr or loggamma")
      ->capture_default_str();
  bench_cmd->add_option("--profile", bench.profile, "scaled or full")
      ->check(CLI::IsMember({"scaled", "full"}))
      ->capture_default_str();
  auto* rep_opt = bench_cmd->add_option("--replications", replications, "Override replications");
  auto* kg_opt = bench_cmd->add_option("--k", k_grid, "Override the k grid (repeatable)");
  auto* bn_opt = bench_cmd->add_option("--n", bench_n, "Override the sample size");
  auto* bp_opt = bench_cmd->add_option("--p", bench_p, "Override the exceedance probability");
  bench_cmd->add_option("--iterations", bench.iterations, "Gibbs iterations")
      ->capture_default_str();
  bench_cmd->add_option("--burn-in", bench.burn_in, "Discarded iterations")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  bench_cmd->add_flag("--pwm", bench.include_pwm, "Include the PWM estimator");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for the figure tables");
  bench_cmd->callback([&] {
    if (rep_opt->count()) bench.replications = replications;
    if (kg_opt->count()) bench.k_grid = k_grid;
    if (bn_opt->count()) bench.n = bench_n;
    if (bp_opt->count()) bench.p = bench_p;
  });

  SimulateOptions sim;
  sim.seed = defaults.seed;
  std::string sim_output;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Draw a sample from a test distribution");
  sim_cmd->add_option("--dist", sim.distribution, "frechet, burr or loggamma")
      ->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--stream", sim.stream_id, "RNG stream id")->capture_default_str();
  sim_cmd->add_option("--output,-o", sim_output, "Output file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto with_output = [](const std::string& path, auto&& body) {
      if (path.empty()) {
        body(std::cout);
        return;
      }
      std::ofstream file(path);
      if (!file) throw gpdqc::Error(gpdqc::ErrorCategory::kIo, "cannot write '" + path + "'");
      body(file);
      if (!file) throw gpdqc::Error(gpdqc::ErrorCategory::kIo, "write failed for '" + path + "'");
    };
    if (fit_cmd->parsed()) {
      const RunReport report = cmd_fit(fit);
      with_output(fit_output, [&](std::ostream& out) {
        if (fit_format == "json") {
          out << to_json(report).dump(2) << "\n";
        } else {
          write_text(report, out);
        }
      });
    } else if (bench_cmd->parsed()) {
      cmd_bench(bench, std::cout);
    } else if (sim_cmd->parsed()) {
      with_output(sim_output, [&](std::ostream& out) { cmd_simulate(sim, out); });
    }
  } catch (const gpdqc::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
