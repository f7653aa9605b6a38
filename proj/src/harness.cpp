#include "oim/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "oim/explorer.hpp"

namespace oim {
namespace {

bool needs_subcritical(const std::string& name) {
  return name == "local_ucb_sub" || name == "ucb_double";
}

std::string regime_report(const Criticality& crit) {
  std::ostringstream msg;
  msg << "criticality: regime=" << to_string(crit.regime) << " operator_norm=" << crit.operator_norm
      << " tolerance=" << crit.tolerance;
  return msg.str();
}

std::vector<VertexId> draw_v0(const AlgorithmConfig& algo, std::int64_t n, Rng& rng) {
  const double horizon = std::max<double>(static_cast<double>(algo.horizon), 2.0);
  if (algo.v0_rule == "quantile") return subsample_v0(n, algo.alpha, horizon, rng);
  if (algo.v0_rule == "kronecker") {
    const std::int64_t size =
        std::clamp<std::int64_t>(ceil_tol(std::log2(static_cast<double>(n) * horizon)), 1, n);
    return sample_without_replacement(n, size, rng);
  }
  if (algo.v0_rule == "all") {
    std::vector<VertexId> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), VertexId{0});
    return all;
  }
  throw InputError("unknown v0_rule '" + algo.v0_rule + "' (expected quantile, kronecker or all)");
}

// Per-vertex regret gaps derived from the baseline.
struct Gaps {
  std::vector<double> clamped;
  std::vector<double> unclamped;
  std::vector<double> full;
};

Gaps make_gaps(const ComponentMeanEstimates& est, const QuantileBaseline& base, std::int64_t n) {
  Gaps g;
  g.clamped.resize(static_cast<std::size_t>(n));
  g.unclamped.resize(static_cast<std::size_t>(n));
  const bool full = n <= kFullRegretMaxN;
  if (full) g.full.resize(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) {
    const double c = *est.mean_of(v);
    const auto i = static_cast<std::size_t>(v);
    g.unclamped[i] = base.c_star_alpha - c;
    g.clamped[i] = std::max(g.unclamped[i], 0.0);
    if (full) g.full[i] = base.c_max - c;
  }
  return g;
}

RegretTrace run_replication(const EdgeSampler& sampler, const std::string& resolved,
                            const AlgorithmConfig& algo, const ExperimentSettings& settings,
                            std::int64_t replication, const Gaps* gaps,
                            const std::string& digest) {
  Rng rng = make_stream(settings.seed, kReplicationStreamBase + static_cast<std::uint64_t>(replication));
  auto policy = make_policy(resolved, algo, sampler.n(), rng);
  ComponentExplorer explorer(sampler);
  const ProbeFn probe = [&explorer](VertexId arm, const FeedbackKind& fb, Rng& g) {
    return explorer.probe(arm, fb, false, g);
  };
  RegretTrace trace;
  trace.seed = settings.seed;
  trace.replication = replication;
  trace.config_digest = digest;
  trace.chosen = run_policy(*policy, algo.horizon, probe, rng);
  trace.arms = policy->arms();
  if (gaps != nullptr) {
    const std::size_t T = trace.chosen.size();
    trace.cumulative_regret.resize(T);
    trace.cumulative_unclamped.resize(T);
    if (!gaps->full.empty()) trace.cumulative_full.resize(T);
    double clamped = 0.0, unclamped = 0.0, full = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const auto v = static_cast<std::size_t>(trace.chosen[t]);
      clamped += gaps->clamped[v];
      unclamped += gaps->unclamped[v];
      trace.cumulative_regret[t] = clamped;
      trace.cumulative_unclamped[t] = unclamped;
      if (!gaps->full.empty()) {
        full += gaps->full[v];
        trace.cumulative_full[t] = full;
      }
    }
  }
  return trace;
}

ExperimentResult run_impl(const GraphModel& model, const AlgorithmConfig& algo,
                          const ExperimentSettings& settings, const ComponentMeanEstimates* supplied,
                          bool parallel) {
  if (algo.horizon < 1) throw InputError("horizon T must be >= 1");
  if (settings.replications < 0) throw InputError("replications must be >= 0");
  if (settings.estimate_samples < 0) throw InputError("estimate_samples must be >= 0");
  if (parallel && settings.threads > 0) omp_set_num_threads(settings.threads);

  ExperimentResult result;
  result.n = vertex_count(model);
  result.criticality = criticality(model, algo.criticality_tolerance);
  result.algorithm = resolve_algorithm(algo, result.criticality);
  result.config_digest = config_digest(model, algo, settings);

  if (supplied != nullptr) {
    if (!supplied->covers_all(result.n)) {
      throw InputError("supplied component-mean estimates do not cover all vertices");
    }
    result.estimates = *supplied;
  } else if (settings.estimate_samples > 0) {
    if (result.n <= kMaxExactVertices) {
      result.estimates = exact_component_means(model);
    } else {
      Rng rng = make_stream(settings.seed, kEstimateStreamBase);
      if (parallel) {
        result.estimates = estimate_class_means(model, settings.estimate_samples, rng);
      } else {
        SymmetryClasses sym = symmetry_classes(model);
        result.estimates =
            estimate_component_means_serial(model, sym.representative, settings.estimate_samples, rng);
        result.estimates->class_of = std::move(sym.class_of);
      }
    }
  }
  std::optional<Gaps> gaps;
  if (result.estimates) {
    result.baseline = quantile_baseline(*result.estimates, result.n, algo.alpha);
    gaps = make_gaps(*result.estimates, *result.baseline, result.n);
  }

  const EdgeSampler sampler(model);
  const Gaps* g = gaps ? &*gaps : nullptr;
  result.traces.resize(static_cast<std::size_t>(settings.replications));
  if (parallel) {
    // Exceptions must not escape the parallel region; the first is rethrown.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < settings.replications; ++r) {
      try {
        result.traces[static_cast<std::size_t>(r)] =
            run_replication(sampler, result.algorithm, algo, settings, r, g, result.config_digest);
      } catch (...) {
#pragma omp critical(oim_replication_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::int64_t r = 0; r < settings.replications; ++r) {
      result.traces[static_cast<std::size_t>(r)] =
          run_replication(sampler, result.algorithm, algo, settings, r, g, result.config_digest);
    }
  }
  return result;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"local_ucb",    "local_ucb_sub", "ucb_double",
                                                 "local_ucb_sup", "d_ucb",        "d_ucb_double"};
  return names;
}

std::string resolve_algorithm(const AlgorithmConfig& algo, const Criticality& crit) {
  const auto& names = algorithm_names();
  if (std::find(names.begin(), names.end(), algo.name) == names.end()) {
    throw InputError("unknown algorithm '" + algo.name + "'");
  }
  if (algo.name == "d_ucb" || algo.name == "d_ucb_double") return algo.name;
  const Regime regime = algo.regime.value_or(crit.regime);
  if (regime == Regime::NearCritical) {
    throw RegimeMismatch("model is near-critical; set algorithm.regime to choose a variant ("
                             + regime_report(crit) + ")",
                         crit);
  }
  if (algo.name == "local_ucb") {
    return regime == Regime::Subcritical ? "local_ucb_sub" : "local_ucb_sup";
  }
  const bool sub = needs_subcritical(algo.name);
  if (sub != (regime == Regime::Subcritical)) {
    throw RegimeMismatch(algo.name + " requires a " + (sub ? "subcritical" : "supercritical") +
                             " model; set algorithm.regime to override (" + regime_report(crit) + ")",
                         crit);
  }
  return algo.name;
}

std::unique_ptr<Policy> make_policy(const std::string& resolved, const AlgorithmConfig& algo,
                                    std::int64_t n, Rng& rng) {
  const double horizon = std::max<double>(static_cast<double>(algo.horizon), 2.0);
  if (resolved == "d_ucb_double") {
    return std::make_unique<DUcbDouble>(n, algo.alpha, algo.beta, algo.exploration_scale);
  }
  std::vector<VertexId> v0 = draw_v0(algo, n, rng);
  if (resolved == "local_ucb_sub") {
    const double k = algo.censoring.value_or(std::max<double>(1.0, ceil_tol(std::log(horizon))));
    return std::make_unique<LocalUcbSubcritical>(std::move(v0), k);
  }
  if (resolved == "ucb_double") return std::make_unique<UcbDouble>(std::move(v0), horizon);
  if (resolved == "local_ucb_sup") {
    const std::int64_t level =
        algo.k_of_n.value_or(std::max<std::int64_t>(1, default_k_of_n(std::max<std::int64_t>(n, 2))));
    return std::make_unique<LocalUcbSupercritical>(std::move(v0), level);
  }
  if (resolved == "d_ucb") return std::make_unique<DUcb>(std::move(v0), algo.exploration_scale);
  throw InputError("cannot build learner '" + resolved + "'");
}

ExperimentResult run_experiment(const GraphModel& model, const AlgorithmConfig& algo,
                                const ExperimentSettings& settings,
                                const ComponentMeanEstimates* estimates) {
  return run_impl(model, algo, settings, estimates, true);
}

ExperimentResult run_experiment_serial(const GraphModel& model, const AlgorithmConfig& algo,
                                       const ExperimentSettings& settings,
                                       const ComponentMeanEstimates* estimates) {
  return run_impl(model, algo, settings, estimates, false);
}

RegretSummary aggregate_regret(const std::vector<RegretTrace>& traces) {
  RegretSummary out;
  if (traces.empty() || traces.front().cumulative_regret.empty()) return out;
  const std::size_t T = traces.front().cumulative_regret.size();
  const auto R = static_cast<double>(traces.size());
  const bool full = !traces.front().cumulative_full.empty();
  out.mean.resize(T);
  out.std_error.resize(T);
  out.mean_unclamped.resize(T);
  if (full) out.mean_full.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0, u = 0.0, f = 0.0;
    for (const auto& tr : traces) {
      s += tr.cumulative_regret[t];
      u += tr.cumulative_unclamped[t];
      if (full) f += tr.cumulative_full[t];
    }
    const double mean = s / R;
    double ss = 0.0;
    for (const auto& tr : traces) ss += (tr.cumulative_regret[t] - mean) * (tr.cumulative_regret[t] - mean);
    out.mean[t] = mean;
    out.std_error[t] = traces.size() > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
    out.mean_unclamped[t] = u / R;
    if (full) out.mean_full[t] = f / R;
  }
  return out;
}

std::vector<std::pair<VertexId, std::int64_t>> pull_counts(const std::vector<RegretTrace>& traces) {
  std::map<VertexId, std::int64_t> counts;
  for (const auto& tr : traces) {
    for (VertexId v : tr.chosen) ++counts[v];
  }
  return {counts.begin(), counts.end()};
}

}  // namespace oim
