#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpdqc/datasets.h"
#include "gpdqc/errors.h"
#include "gpdqc/gibbs.h"
#include "gpdqc/rng.h"
#include "gpdqc/sample.h"

namespace gpdqc::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double v, const char* spec = "%.6g") {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// JSON has no infinities; they are written as null.
Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <typename T>
T env_value(const char* name, T fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  std::istringstream in(raw);
  T value{};
  char extra = 0;
  if (!(in >> value) || (in >> extra)) {
    throw Error(ErrorCategory::kValidation,
                std::string(name) + ": cannot parse '" + raw + "'");
  }
  return value;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct LoadedSample {
  ExcessSample sample;
  std::string source;
};

LoadedSample load_sample(const FitOptions& opts) {
  if (opts.input.has_value() == opts.dataset.has_value()) {
    throw Error(ErrorCategory::kValidation, "give exactly one of --input and --dataset");
  }
  if (opts.k && opts.threshold && !opts.excesses_input) {
    throw Error(ErrorCategory::kValidation, "--k and --threshold are mutually exclusive");
  }
  std::vector<double> values;
  std::optional<double> data_threshold;
  std::optional<double> data_years;
  LoadedSample out;
  if (opts.dataset) {
    Dataset ds = builtin_dataset(*opts.dataset);
    values = std::move(ds.values);
    data_threshold = ds.threshold;
    data_years = ds.years;
    out.source = "dataset:" + ds.name;
  } else {
    values = load_values(*opts.input);
    out.source = "file:" + *opts.input;
  }
  if (values.empty()) throw Error(ErrorCategory::kValidation, "no data values");

  if (opts.excesses_input) {
    if (!opts.n || !opts.threshold) {
      throw Error(ErrorCategory::kValidation, "--excesses needs --n and --threshold");
    }
    if (opts.k) throw Error(ErrorCategory::kValidation, "--k cannot be used with --excesses");
    ExcessSample& s = out.sample;
    s.threshold = *opts.threshold;
    s.n = *opts.n;
    s.excesses = values;
    std::sort(s.excesses.begin(), s.excesses.end(), std::greater<>());
    s.ties_at_threshold = static_cast<std::size_t>(
        std::count(s.excesses.begin(), s.excesses.end(), 0.0));
  } else if (opts.k) {
    out.sample = extract_excesses(values, *opts.k);
  } else {
    const std::optional<double> u = opts.threshold ? opts.threshold : data_threshold;
    if (!u) throw Error(ErrorCategory::kValidation, "give --k or --threshold");
    out.sample = excesses_over_threshold(values, *u);
    if (opts.n) {
      if (*opts.n < values.size()) {
        throw Error(ErrorCategory::kValidation, "--n is smaller than the number of values");
      }
      out.sample.n = *opts.n;
    }
  }
  out.sample.years = opts.years ? opts.years : data_years;
  out.sample.validate();
  return out;
}

std::vector<TailMethod> selected_methods(const FitOptions& opts) {
  if (opts.methods.empty()) {
    return {TailMethod::kBayesQc, TailMethod::kMl, TailMethod::kPwm,
            TailMethod::kMti,     TailMethod::kZipfG, TailMethod::kHill};
  }
  std::vector<TailMethod> out;
  for (const auto& name : opts.methods) {
    const TailMethod m = parse_method(name);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

void check_options(const FitOptions& opts, const ExcessSample& sample) {
  for (double p : opts.probabilities) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCategory::kValidation, "quantile probabilities must lie in (0,1)");
    }
  }
  for (double N : opts.return_periods) {
    if (!(N > 0.0)) throw Error(ErrorCategory::kValidation, "return periods must be positive");
  }
  if ((opts.premium || !opts.return_periods.empty()) && !sample.years) {
    throw Error(ErrorCategory::kValidation,
                "--premium and --return-period need the observation period (--years)");
  }
  if (!(opts.level > 0.0 && opts.level < 1.0)) {
    throw Error(ErrorCategory::kValidation, "--level must lie in (0,1)");
  }
}

MethodReport run_comparator(TailMethod method, const FitOptions& opts,
                            const ExcessSample& sample) {
  MethodReport r;
  r.method = method;
  try {
    const TailFit fit = fit_tail(method, sample);
    r.fit = fit;
    if (!fit.converged) return r;
    for (double p : opts.probabilities) {
      r.quantiles.emplace_back(p, pot_quantile(fit, quantile_request(sample, p)));
    }
    for (double N : opts.return_periods) {
      r.return_levels.emplace_back(N, return_level(fit, N, sample));
    }
    if (opts.premium) r.premium = net_premium(fit, sample);
  } catch (const Error& e) {
    r.error = std::string(category_name(e.category())) + ": " + e.what();
  }
  return r;
}

BayesReport run_bayes(const FitOptions& opts, const ExcessSample& sample) {
  BayesReport b;
  if (opts.expert_file) {
    b.hyper = expert_hyperparameters(load_expert_opinion(*opts.expert_file), sample);
    b.prior = "expert";
  } else {
    b.hyper = empirical_hyperparameters(sample);
    b.prior = "empirical";
  }
  ChainConfig cfg;
  cfg.total_iterations = opts.iterations;
  cfg.burn_in = opts.burn_in;
  cfg.seed = opts.seed;
  cfg.stream_id = 0;
  cfg.hyper = b.hyper;
  const ChainOutput chain = run_chain(sample, cfg);
  b.iterations = opts.iterations;
  b.burn_in = opts.burn_in;
  b.stream_id = cfg.stream_id;
  b.retained = chain.size();
  b.acceptance_rate = chain.acceptance_rate;
  b.gamma = summarize(chain.gammas(), opts.level);
  b.sigma = summarize(chain.sigmas(), opts.level);
  for (double p : opts.probabilities) {
    b.quantiles.emplace_back(
        p, summarize(posterior_quantile_draws(chain, quantile_request(sample, p)), opts.level));
  }
  for (double N : opts.return_periods) {
    b.return_levels.emplace_back(N, return_level(chain, N, sample, opts.level));
  }
  if (opts.premium) b.premium = net_premium(chain, sample, opts.level);
  return b;
}

Json summary_json(const PosteriorSummary& s) {
  Json j;
  j["median"] = num(s.median);
  j["mean"] = num(s.mean);
  j["ci_lo"] = num(s.ci_lo);
  j["ci_hi"] = num(s.ci_hi);
  return j;
}

std::string summary_text(const PosteriorSummary& s) {
  return fmt(s.median) + "  [" + fmt(s.ci_lo) + ", " + fmt(s.ci_hi) + "]";
}

}  // namespace

RunDefaults run_defaults_from_env() {
  RunDefaults d;
  d.iterations = env_value<int>("GPDQC_ITERATIONS", d.iterations);
  d.burn_in = env_value<int>("GPDQC_BURN_IN", d.burn_in);
  d.seed = env_value<std::uint64_t>("GPDQC_SEED", d.seed);
  return d;
}

const MethodReport* RunReport::method(TailMethod m) const {
  for (const auto& r : methods) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

RunReport cmd_fit(const FitOptions& opts) {
  const LoadedSample loaded = load_sample(opts);
  const ExcessSample& sample = loaded.sample;
  check_options(opts, sample);

  RunReport report;
  report.source = loaded.source;
  report.n = sample.n;
  report.k = sample.k();
  report.threshold = sample.threshold;
  report.years = sample.years;
  report.seed = opts.seed;
  report.level = opts.level;
  if (opts.timestamp) report.timestamp = utc_timestamp();

  for (TailMethod m : selected_methods(opts)) {
    if (m == TailMethod::kBayesQc) {
      try {
        report.bayes = run_bayes(opts, sample);
      } catch (const Error& e) {
        throw Error(e.category(), std::string("Bayes-QC: ") + e.what());
      }
    } else if (m == TailMethod::kExpBayes) {
      if (opts.probabilities.empty()) {
        throw Error(ErrorCategory::kValidation, "ExpBayes needs at least one --p");
      }
      ExpBayesReport eb{opts.exp_a, opts.exp_b, {}};
      for (double p : opts.probabilities) {
        eb.rows.push_back({p, exp_bayes_quantiles(sample, opts.exp_a, opts.exp_b, p)});
      }
      report.exp_bayes = std::move(eb);
    } else {
      report.methods.push_back(run_comparator(m, opts, sample));
    }
  }
  return report;
}

nlohmann::ordered_json to_json(const RunReport& report) {
  Json j;
  j["schema"] = kFitSchema;
  j["version"] = report.version;
  if (report.timestamp) j["timestamp"] = *report.timestamp;
  j["seed"] = report.seed;
  j["level"] = report.level;
  j["input"] = {{"source", report.source},
                {"n", report.n},
                {"k", report.k},
                {"threshold", report.threshold},
                {"years", report.years ? Json(*report.years) : Json(nullptr)}};
  Json methods = Json::array();
  for (const auto& m : report.methods) {
    Json e;
    e["method"] = std::string(method_name(m.method));
    if (m.fit) {
      e["gamma"] = num(m.fit->gamma);
      e["sigma"] = num(m.fit->sigma);
      e["converged"] = m.fit->converged;
      if (!m.fit->note.empty()) e["note"] = m.fit->note;
    }
    if (!m.error.empty()) e["error"] = m.error;
    Json q = Json::array();
    for (const auto& [p, v] : m.quantiles) q.push_back({{"p", p}, {"value", num(v)}});
    e["quantiles"] = q;
    Json rl = Json::array();
    for (const auto& [N, v] : m.return_levels) rl.push_back({{"years", N}, {"value", num(v)}});
    e["return_levels"] = rl;
    if (m.premium) e["premium"] = num(*m.premium);
    methods.push_back(e);
  }
  j["methods"] = methods;
  if (report.bayes) {
    const BayesReport& b = *report.bayes;
    Json e;
    e["prior"] = b.prior;
    e["hyper"] = {{"delta", b.hyper.delta}, {"eta", b.hyper.eta}, {"mu", b.hyper.mu}};
    e["chain"] = {{"iterations", b.iterations},
                  {"burn_in", b.burn_in},
                  {"stream_id", b.stream_id},
                  {"retained", b.retained},
                  {"acceptance_rate", b.acceptance_rate}};
    e["gamma"] = summary_json(b.gamma);
    e["sigma"] = summary_json(b.sigma);
    Json q = Json::array();
    for (const auto& [p, s] : b.quantiles) {
      Json row = summary_json(s);
      row["p"] = p;
      q.push_back(row);
    }
    e["quantiles"] = q;
    Json rl = Json::array();
    for (const auto& [N, s] : b.return_levels) {
      Json row = summary_json(s);
      row["years"] = N;
      rl.push_back(row);
    }
    e["return_levels"] = rl;
    if (b.premium) {
      Json p = summary_json(b.premium->summary);
      p["infinite_draws"] = b.premium->infinite_draws;
      p["infinite_fraction"] = b.premium->infinite_fraction;
      e["premium"] = p;
    }
    j["bayes"] = e;
  }
  if (report.exp_bayes) {
    Json e;
    e["a"] = report.exp_bayes->a;
    e["b"] = report.exp_bayes->b;
    Json rows = Json::array();
    for (const auto& r : report.exp_bayes->rows) {
      rows.push_back({{"p", r.p},
                      {"q_bayes", num(r.q.q_bayes)},
                      {"q_pred", num(r.q.q_pred)},
                      {"q_post", num(r.q.q_post)}});
    }
    e["quantiles"] = rows;
    j["exp_bayes"] = e;
  }
  return j;
}

void write_text(const RunReport& report, std::ostream& out) {
  out << "gpdqc " << report.version << "\n";
  if (report.timestamp) out << "timestamp  " << *report.timestamp << "\n";
  out << "source     " << report.source << "\n"
      << "n          " << report.n << "\n"
      << "k          " << report.k << "\n"
      << "threshold  " << fmt(report.threshold) << "\n";
  if (report.years) out << "years      " << fmt(*report.years) << "\n";
  out << "seed       " << report.seed << "\n"
      << "level      " << fmt(report.level) << "\n";

  if (report.bayes) {
    const BayesReport& b = *report.bayes;
    out << "\n[BayesQC]\n"
        << "prior      " << b.prior << " (delta " << fmt(b.hyper.delta) << ", eta "
        << fmt(b.hyper.eta) << ", mu " << fmt(b.hyper.mu) << ")\n"
        << "chain      " << b.iterations << " iterations, " << b.burn_in << " burn-in, "
        << b.retained << " retained, acceptance " << fmt(b.acceptance_rate, "%.3f") << "\n"
        << "gamma      " << summary_text(b.gamma) << "\n"
        << "sigma      " << summary_text(b.sigma) << "\n";
    for (const auto& [p, s] : b.quantiles) {
      out << "q(p=" << fmt(p) << ")  " << summary_text(s) << "\n";
    }
    for (const auto& [N, s] : b.return_levels) {
      out << "return level " << fmt(N) << "y  " << summary_text(s) << "\n";
    }
    if (b.premium) {
      out << "premium    " << summary_text(b.premium->summary) << "  ("
          << b.premium->infinite_draws << " draws with gamma >= 1)\n";
    }
  }

  if (!report.methods.empty()) {
    char buf[64];
    auto head = [&](const std::string& label) {
      std::snprintf(buf, sizeof buf, "  %10s", label.c_str());
      out << buf;
    };
    out << "\nmethod  ";
    head("gamma");
    head("sigma");
    const MethodReport& first = report.methods.front();
    for (const auto& [p, v] : first.quantiles) head("q(" + fmt(p) + ")");
    for (const auto& [N, v] : first.return_levels) head("RL(" + fmt(N) + ")");
    if (first.premium) head("premium");
    out << "\n";
    for (const auto& m : report.methods) {
      std::snprintf(buf, sizeof buf, "%-8s", std::string(method_name(m.method)).c_str());
      out << buf;
      if (!m.error.empty()) {
        out << "  failed: " << m.error << "\n";
        continue;
      }
      if (!m.fit->converged) {
        out << "  not converged\n";
        continue;
      }
      auto cell = [&](double v) {
        std::snprintf(buf, sizeof buf, "  %10s", fmt(v).c_str());
        out << buf;
      };
      cell(m.fit->gamma);
      cell(m.fit->sigma);
      for (const auto& [p, v] : m.quantiles) cell(v);
      for (const auto& [N, v] : m.return_levels) cell(v);
      if (m.premium) cell(*m.premium);
      if (!m.fit->note.empty()) out << "  (" << m.fit->note << ")";
      out << "\n";
    }
  }

  if (report.exp_bayes) {
    out << "\n[ExpBayes] a " << fmt(report.exp_bayes->a) << ", b " << fmt(report.exp_bayes->b)
        << "\n";
    for (const auto& r : report.exp_bayes->rows) {
      out << "p=" << fmt(r.p) << "  q_bayes " << fmt(r.q.q_bayes) << "  q_pred "
          << fmt(r.q.q_pred) << "  q_post " << fmt(r.q.q_post) << "\n";
    }
  }
}

BenchDesign bench_design(const BenchOptions& opts) {
  const BenchDistribution dist = parse_distribution(opts.distribution);
  BenchDesign d;
  if (opts.profile == "scaled") {
    d = BenchDesign::scaled(dist);
  } else if (opts.profile == "full") {
    d = BenchDesign::full(dist);
  } else {
    throw Error(ErrorCategory::kValidation,
                "unknown profile '" + opts.profile + "' (scaled or full)");
  }
  if (opts.replications) d.replications = *opts.replications;
  if (opts.k_grid) d.k_grid = *opts.k_grid;
  if (opts.n) d.n = *opts.n;
  if (opts.p) d.p = *opts.p;
  d.chain.total_iterations = opts.iterations;
  d.chain.burn_in = opts.burn_in;
  d.seed = opts.seed;
  d.threads = opts.threads;
  d.include_pwm = opts.include_pwm;
  d.validate();
  return d;
}

BenchReport cmd_bench(const BenchOptions& opts, std::ostream& out) {
  const BenchReport report = run_bench(bench_design(opts));
  if (!opts.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) {
      throw Error(ErrorCategory::kIo, "cannot create '" + opts.out_dir + "': " + ec.message());
    }
    for (FigureKind kind : {FigureKind::kMeans, FigureKind::kCoverage, FigureKind::kWidth,
                            FigureKind::kIntervals}) {
      const std::filesystem::path path =
          std::filesystem::path(opts.out_dir) /
          (std::string(distribution_name(report.distribution)) + "_" +
           std::string(figure_name(kind)) + ".tsv");
      std::ofstream file(path);
      if (!file) throw Error(ErrorCategory::kIo, "cannot write '" + path.string() + "'");
      emit_figure_data(report, kind, file);
      if (!file) throw Error(ErrorCategory::kIo, "write failed for '" + path.string() + "'");
    }
  }
  write_bench_summary(report, out);
  return report;
}

void write_bench_summary(const BenchReport& report, std::ostream& out) {
  out << "distribution  " << distribution_name(report.distribution) << " (rho "
      << fmt(report.rho) << ")\n"
      << "design        n " << report.n << ", " << report.replications
      << " replications, p " << fmt(report.p) << "\n"
      << "true values   gamma " << fmt(report.true_gamma) << ", q " << fmt(report.true_q)
      << "\n\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%5s  %-8s %5s %10s %12s %12s\n", "k", "method", "valid",
                "mean_gamma", "mean_q", "mcci_q_width");
  out << buf;
  for (const auto& c : report.cells) {
    std::snprintf(buf, sizeof buf, "%5d  %-8s %5zu %10s %12s %12s\n", c.k,
                  std::string(method_name(c.method)).c_str(), c.valid,
                  fmt(c.mean_gamma, "%.4f").c_str(), fmt(c.mean_q, "%.5g").c_str(),
                  fmt(c.mcci_q_width(), "%.5g").c_str());
    out << buf;
  }
  out << "\nBayesQC coverage of the " << fmt(100.0 * report.level) << "% credibility intervals\n";
  std::snprintf(buf, sizeof buf, "%5s %5s %8s %8s\n", "k", "valid", "gamma", "q");
  out << buf;
  for (const auto& c : report.coverage) {
    std::snprintf(buf, sizeof buf, "%5d %5zu %8zu %8zu\n", c.k, c.valid, c.covered_gamma,
                  c.covered_q);
    out << buf;
  }
}

void cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
  const BenchDistribution dist = parse_distribution(opts.distribution);
  if (opts.n == 0) throw Error(ErrorCategory::kValidation, "--n must be positive");
  RngStream rng(opts.seed, opts.stream_id);
  char buf[40];
  for (std::size_t i = 0; i < opts.n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", draw(dist, rng));
    out << buf;
  }
}

}  // namespace gpdqc::cli
