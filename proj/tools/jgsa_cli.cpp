// jgsa: command-line runner for the JGSA domain-adaptation library.
//
//   jgsa run <config> [--method m] [--k N] [--t-max N] [--beta x] [--kernel k] [--seed N] [--out path]
//   jgsa synth-demo [--seed N] [--kernel k] [--out path]
//   jgsa report-diff <a> <b>
//   jgsa gen-synth --seed N --source-out s.csv --target-out t.csv
//
// Exit codes: 0 success, 1 report-diff found differences, 2 config error,
// 3 data error, 4 numerical failure.

#include "jgsa/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitDiffers = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct Overrides {
  std::string method;
  std::optional<long long> k;
  std::optional<int> t_max;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::string kernel;
  std::string bandwidth;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string iterations_csv;
  std::string model_out;

  void add_to(CLI::App* app) {
    app->add_option("--method", method, "none, pca, sa, jgsa, a comma list, or all");
    app->add_option("--k", k, "subspace dimension");
    app->add_option("--t-max", t_max, "iteration cap");
    app->add_option("--beta", beta, "within/between-class trade-off");
    app->add_option("--lambda", lambda, "subspace-shift weight");
    app->add_option("--mu", mu, "target-variance weight");
    app->add_option("--kernel", kernel, "primal, linear or rbf");
    app->add_option("--bandwidth", bandwidth, "rbf sigma or 'median'");
    app->add_option("--seed", seed, "run seed");
    app->add_option("--out", out, "report path");
    app->add_option("--iterations-csv", iterations_csv, "per-iteration CSV path");
    app->add_option("--model-out", model_out, "write the fitted JGSA model here");
  }

  void apply(jgsa::ExperimentConfig& cfg) const {
    if (!method.empty()) cfg.set("method", method);
    if (k) cfg.params.k = *k;
    if (t_max) cfg.params.t_max = *t_max;
    if (beta) cfg.params.beta = *beta;
    if (lambda) cfg.params.lambda = *lambda;
    if (mu) cfg.params.mu = *mu;
    if (!kernel.empty()) cfg.set("kernel", kernel);
    if (!bandwidth.empty()) cfg.set("bandwidth", bandwidth);
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.out = out;
    if (!iterations_csv.empty()) cfg.iterations_csv = iterations_csv;
    if (!model_out.empty()) cfg.model_out = model_out;
  }
};

void print_summary(const jgsa::RunReport& report) {
  for (const auto& [name, m] : report.methods) {
    std::cerr << name << ": accuracy ";
    if (m.accuracy) std::cerr << *m.accuracy;
    else std::cerr << "n/a";
    std::cerr << "  mmd " << m.mmd << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JGSA unsupervised domain adaptation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  run->add_option("config", config_path, "key = value config file")->required();
  Overrides run_overrides;
  run_overrides.add_to(run);

  auto* demo = app.add_subcommand("synth-demo", "all methods on the default synthetic problem");
  Overrides demo_overrides;
  demo_overrides.add_to(demo);

  auto* diff = app.add_subcommand("report-diff", "compare two reports, ignoring timing");
  std::string diff_a;
  std::string diff_b;
  diff->add_option("a", diff_a)->required();
  diff->add_option("b", diff_b)->required();

  auto* gen = app.add_subcommand("gen-synth", "write the default synthetic source/target pair");
  std::uint64_t gen_seed = 0;
  std::size_t gen_per_class = 100;
  std::string gen_source;
  std::string gen_target;
  gen->add_option("--seed", gen_seed);
  gen->add_option("--samples-per-class", gen_per_class);
  gen->add_option("--source-out", gen_source)->required();
  gen->add_option("--target-out", gen_target)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      jgsa::ExperimentConfig cfg = jgsa::parse_config(config_path);
      run_overrides.apply(cfg);
      const auto outcome = jgsa::run_experiment(cfg);
      if (cfg.out.empty()) std::cout << jgsa::report_to_text(outcome.report);
      print_summary(outcome.report);
    } else if (*demo) {
      jgsa::ExperimentConfig cfg;
      cfg.methods = jgsa::parse_methods("all");
      cfg.params.k = 2;
      cfg.params.t_max = 10;
      cfg.params.beta = 0.1;
      demo_overrides.apply(cfg);
      const auto outcome = jgsa::run_experiment(cfg);
      if (cfg.out.empty()) std::cout << jgsa::report_to_text(outcome.report);
      print_summary(outcome.report);
    } else if (*diff) {
      const auto diffs = jgsa::report_diff(diff_a, diff_b);
      for (const auto& d : diffs) std::cout << d.key << ": " << d.left << " | " << d.right << '\n';
      return diffs.empty() ? 0 : kExitDiffers;
    } else if (*gen) {
      auto spec = jgsa::default_synthetic_spec(gen_seed);
      spec.samples_per_class = gen_per_class;
      const auto pair = jgsa::generate_synthetic(spec);
      jgsa::save_dataset(pair.source, gen_source, jgsa::format_for_path(gen_source));
      jgsa::save_dataset(pair.target, gen_target, jgsa::format_for_path(gen_target));
    }
  } catch (const jgsa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const jgsa::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const jgsa::ConditioningError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
