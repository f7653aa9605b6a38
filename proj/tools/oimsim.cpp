// oimsim: experiments, baselines and validation suites from the command line.
//
// Exit codes: 0 success, 1 runtime error, 2 usage or parse error,
// 3 regime guard refused the algorithm.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oim/config.hpp"
#include "oim/harness.hpp"
#include "oim/persist.hpp"
#include "oim/validation.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRegime = 3;

// Default output root for relative out_dir values.
constexpr const char* kOutputRootEnv = "OIMSIM_OUTPUT_ROOT";

struct CommonOptions {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "Experiment configuration (JSON)")->required();
  cmd->add_option("-o,--out", o.out, "Output directory (overrides experiment.out_dir)");
  cmd->add_option("--override", o.overrides, "section.key=value, repeatable")->take_all();
  cmd->add_option("--seed", o.seed, "Master seed (overrides experiment.seed)");
  cmd->add_option("--threads", o.threads, "Worker thread cap (0 = default)")->check(CLI::NonNegativeNumber);
}

oim::ExperimentConfig load(const CommonOptions& o) {
  auto overrides = o.overrides;
  if (o.seed) overrides.push_back("experiment.seed=" + std::to_string(*o.seed));
  if (o.threads > 0) overrides.push_back("experiment.threads=" + std::to_string(o.threads));
  return oim::load_config(o.config, overrides);
}

fs::path output_dir(const CommonOptions& o, const oim::ExperimentConfig& cfg) {
  if (!o.out.empty()) return o.out;
  fs::path dir = cfg.experiment.out_dir;
  if (dir.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
      return fs::path(root) / dir;
    }
  }
  return dir;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int cmd_run(const CommonOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const oim::ExperimentConfig cfg = load(o);
  apply_threads(cfg.experiment.threads);
  const oim::ExperimentResult result = oim::run_experiment(cfg.model, cfg.algorithm, cfg.experiment);
  const fs::path out = output_dir(o, cfg);
  oim::persist_results(result, cfg.document, out);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream line;
  line << "status=ok algorithm=" << result.algorithm << " n=" << result.n
       << " T=" << cfg.algorithm.horizon << " replications=" << result.traces.size()
       << " regime=" << oim::to_string(result.criticality.regime);
  const oim::RegretSummary s = oim::aggregate_regret(result.traces);
  if (!s.mean.empty()) {
    line << " final_mean_cum_regret=" << s.mean.back() << " final_stderr=" << s.std_error.back();
  } else {
    line << " final_mean_cum_regret=na";
  }
  line << " wall_seconds=" << wall << " out=" << out.string();
  std::cout << line.str() << std::endl;
  return 0;
}

int cmd_estimate(const CommonOptions& o, std::int64_t samples) {
  const oim::ExperimentConfig cfg = load(o);
  apply_threads(cfg.experiment.threads);
  const std::int64_t n = oim::vertex_count(cfg.model);
  const std::int64_t count = samples > 0 ? samples : cfg.experiment.estimate_samples;
  oim::ComponentMeanEstimates est;
  if (n <= oim::kMaxExactVertices) {
    est = oim::exact_component_means(cfg.model);
  } else {
    if (count < 1) throw oim::ConfigError("estimation needs samples >= 1");
    oim::Rng rng = oim::make_stream(cfg.experiment.seed, oim::kEstimateStreamBase);
    est = oim::estimate_class_means(cfg.model, count, rng);
  }
  const oim::QuantileBaseline base = oim::quantile_baseline(est, n, cfg.algorithm.alpha);
  const fs::path out = output_dir(o, cfg);
  fs::create_directories(out);
  const fs::path path = out / "estimates.csv";
  std::ofstream file(path);
  if (!file) throw oim::PersistError("cannot write '" + path.string() + "'");
  file << "class,representative,size,expected_degree,c_hat,stderr\n";
  const oim::SymmetryClasses sym = est.class_of.empty() ? oim::SymmetryClasses{} : oim::symmetry_classes(cfg.model);
  file.precision(12);
  for (std::size_t c = 0; c < est.nodes.size(); ++c) {
    const std::int64_t size = sym.size.empty() ? 1 : sym.size[c];
    file << c << ',' << est.nodes[c] << ',' << size << ',' << oim::expected_degree(cfg.model, est.nodes[c])
         << ',' << est.mean[c] << ',' << est.std_error[c] << '\n';
  }
  std::cout << "status=ok method=" << oim::to_string(est.method) << " classes=" << est.nodes.size()
            << " c_star_alpha=" << base.c_star_alpha << " c_max=" << base.c_max
            << " near_optimal=" << base.near_optimal.size() << " out=" << path.string() << std::endl;
  return 0;
}

int cmd_criticality(const CommonOptions& o) {
  const oim::ExperimentConfig cfg = load(o);
  const oim::Criticality c = oim::criticality(cfg.model, cfg.algorithm.criticality_tolerance);
  std::cout << "model=" << oim::model_kind(cfg.model) << " n=" << oim::vertex_count(cfg.model)
            << " regime=" << oim::to_string(c.regime) << " operator_norm=" << c.operator_norm
            << " tolerance=" << c.tolerance << std::endl;
  return 0;
}

int cmd_validate(const std::string& suite, const oim::ValidationOptions& options) {
  const auto& names = oim::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "error: unknown suite '" << suite << "' (expected dominance, tails, oracles, klucb, "
              << "monotonicity or all)\n";
    return kExitUsage;
  }
  const oim::CheckList checks = oim::run_suite(suite, options);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured
              << " bound=" << c.bound;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << '\n';
    if (!c.passed) ++failed;
  }
  std::cout << "suite=" << suite << " checks=" << checks.size() << " failed=" << failed << std::endl;
  return failed == 0 ? 0 : kExitRuntime;
}

int cmd_plot_data(const std::string& dir) {
  const oim::PlotData data = oim::write_plot_data(dir);
  std::cout << "status=ok stride=" << data.stride << " curve_rows=" << data.curve_rows
            << " files=" << data.written.size() << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online influence maximization under local feedback"};
  app.set_version_flag("--version", OIM_VERSION);
  app.require_subcommand(1, 1);

  CommonOptions run_opts, est_opts, crit_opts;
  auto* run = app.add_subcommand("run", "Run an experiment and persist its results");
  add_common(run, run_opts);

  auto* estimate = app.add_subcommand("estimate", "Estimate component means and the quantile baseline");
  add_common(estimate, est_opts);
  std::int64_t samples = 0;
  estimate->add_option("--samples", samples, "Samples per symmetry class (default from config)");

  auto* crit = app.add_subcommand("criticality", "Report the operator norm and regime of a model");
  add_common(crit, crit_opts);

  auto* validate = app.add_subcommand("validate", "Run a property suite");
  std::string suite;
  oim::ValidationOptions vopts;
  bool quick = false;
  int vthreads = 0;
  validate->add_option("suite", suite, "dominance, tails, oracles, klucb, monotonicity or all")->required();
  validate->add_option("--seed", vopts.seed, "Seed of the suite");
  validate->add_flag("--quick", quick, "Reduce sample counts tenfold");
  validate->add_option("--threads", vthreads, "Worker thread cap (0 = default)")->check(CLI::NonNegativeNumber);

  auto* plot = app.add_subcommand("plot-data", "Write plot-ready files for a persisted run");
  std::string results_dir;
  plot->add_option("results_dir", results_dir, "Directory of a persisted run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*estimate) return cmd_estimate(est_opts, samples);
    if (*crit) return cmd_criticality(crit_opts);
    if (*validate) {
      if (quick) vopts.scale = 0.1;
      apply_threads(vthreads);
      return cmd_validate(suite, vopts);
    }
    if (*plot) return cmd_plot_data(results_dir);
  } catch (const oim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const oim::RegimeMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
