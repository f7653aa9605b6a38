#pragma once

// Experiment driver: regime guard, ground-truth baselines, replications and
// regret accounting.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oim/estimates.hpp"
#include "oim/graph_models.hpp"
#include "oim/policies.hpp"

namespace oim {

struct AlgorithmConfig {
  /// local_ucb_sub, ucb_double, local_ucb_sup, d_ucb, d_ucb_double, or
  /// local_ucb (sub- or supercritical variant picked by criticality).
  std::string name = "local_ucb";
  double alpha = 0.5;
  std::int64_t horizon = 1000;
  /// Censoring level of local_ucb_sub; ceil(log T) when unset.
  std::optional<double> censoring;
  double beta = 2.0;
  /// Exceedance level of local_ucb_sup; ceil(log2(n)^2) when unset.
  std::optional<std::int64_t> k_of_n;
  double exploration_scale = 3.0;
  /// Regime assumed instead of the computed one.
  std::optional<Regime> regime;
  /// V0 size rule: "quantile" ceil(log T / log(1/(1-alpha))), "kronecker"
  /// ceil(log2(n T)), or "all" (every vertex).
  std::string v0_rule = "quantile";
  double criticality_tolerance = 0.05;
};

struct ExperimentSettings {
  std::int64_t replications = 10;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  /// Monte-Carlo samples per symmetry class for the regret baseline. Zero
  /// skips the baseline; traces then carry arms only.
  std::int64_t estimate_samples = 100000;
  /// Worker threads; 0 keeps the OpenMP default.
  int threads = 0;
};

/// The algorithm does not fit the model's regime (or the regime is
/// near-critical and no override was given).
class RegimeMismatch : public std::runtime_error {
 public:
  RegimeMismatch(const std::string& what, Criticality report)
      : std::runtime_error(what), report_(report) {}
  const Criticality& report() const { return report_; }

 private:
  Criticality report_;
};

const std::vector<std::string>& algorithm_names();

/// Applies the regime guard and returns the concrete algorithm name.
std::string resolve_algorithm(const AlgorithmConfig& algo, const Criticality& crit);

struct RegretTrace {
  std::uint64_t seed = 0;
  std::int64_t replication = 0;
  std::string config_digest;
  std::vector<VertexId> chosen;              // A_1..A_T
  std::vector<VertexId> arms;                // action set at the end of the run
  /// Cumulative sum of (c*_alpha - c_{A_t})_+; empty without a baseline.
  std::vector<double> cumulative_regret;
  /// Same without clamping.
  std::vector<double> cumulative_unclamped;
  /// Against max_i c_i; only for n <= kFullRegretMaxN.
  std::vector<double> cumulative_full;
};

inline constexpr std::int64_t kFullRegretMaxN = 1000;

struct ExperimentResult {
  std::int64_t n = 0;
  std::string algorithm;
  Criticality criticality{};
  std::string config_digest;
  std::optional<ComponentMeanEstimates> estimates;
  std::optional<QuantileBaseline> baseline;
  std::vector<RegretTrace> traces;
};

/// Builds the learner of one replication, including its V0 draw.
std::unique_ptr<Policy> make_policy(const std::string& resolved, const AlgorithmConfig& algo,
                                    std::int64_t n, Rng& rng);

/// Full experiment, replications in parallel. Each replication owns the
/// stream (seed, replication), so output does not depend on threads.
/// Estimates are computed unless supplied. Throws RegimeMismatch from the
/// guard and InputError when supplied estimates do not cover all vertices.
ExperimentResult run_experiment(const GraphModel& model, const AlgorithmConfig& algo,
                                const ExperimentSettings& settings,
                                const ComponentMeanEstimates* estimates = nullptr);

/// Single-threaded reference for run_experiment.
ExperimentResult run_experiment_serial(const GraphModel& model, const AlgorithmConfig& algo,
                                       const ExperimentSettings& settings,
                                       const ComponentMeanEstimates* estimates = nullptr);

struct RegretSummary {
  std::vector<double> mean;            // mean cumulative regret per round
  std::vector<double> std_error;
  std::vector<double> mean_unclamped;
  std::vector<double> mean_full;       // empty unless available
};

/// Per-round mean and standard error over replications.
RegretSummary aggregate_regret(const std::vector<RegretTrace>& traces);

/// Total pulls per vertex over all replications, as (vertex, pulls) sorted
/// by vertex; unpulled vertices are omitted.
std::vector<std::pair<VertexId, std::int64_t>> pull_counts(const std::vector<RegretTrace>& traces);

/// Digest of the configuration that determines the results.
std::string config_digest(const GraphModel& model, const AlgorithmConfig& algo,
                          const ExperimentSettings& settings);

}  // namespace oim
