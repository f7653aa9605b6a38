#pragma once

// Ground-truth expected component sizes c_i = E|C_i| and the quantile
// baseline derived from them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oim/graph_models.hpp"
#include "oim/random.hpp"

namespace oim {

enum class EstimateMethod { MonteCarlo, ExactEnumeration };

std::string to_string(EstimateMethod m);

struct ComponentMeanEstimates {
  EstimateMethod method = EstimateMethod::MonteCarlo;
  std::int64_t samples = 0;  // per node; 0 for exact enumeration
  std::vector<VertexId> nodes;
  std::vector<double> mean;
  std::vector<double> std_error;
  /// When non-empty (size n), vertex v shares the estimate of
  /// nodes[class_of[v]]; the estimates then cover every vertex.
  std::vector<int> class_of;

  bool covers_all(std::int64_t n) const;
  /// Estimate for vertex v, if covered.
  std::optional<double> mean_of(VertexId v) const;
};

/// Samples per parallel task. Streams are derived per (node, chunk), so the
/// result is independent of the thread count.
inline constexpr std::int64_t kEstimateChunk = 2048;

/// Monte-Carlo c_i for each listed node: `samples` independent realizations,
/// each explored exhaustively. OpenMP-parallel over (node, chunk) tasks.
/// Advances `rng` by exactly one draw. Throws CapExceeded if exhaustive
/// exploration is not admissible for the model's n.
ComponentMeanEstimates estimate_component_means(const GraphModel& model,
                                                const std::vector<VertexId>& nodes,
                                                std::int64_t samples, Rng& rng);

/// Single-threaded reference for estimate_component_means; bit-identical
/// output for identical inputs.
ComponentMeanEstimates estimate_component_means_serial(const GraphModel& model,
                                                       const std::vector<VertexId>& nodes,
                                                       std::int64_t samples, Rng& rng);

/// Monte-Carlo estimates for one representative per symmetry class, shared
/// by every member of the class.
ComponentMeanEstimates estimate_class_means(const GraphModel& model, std::int64_t samples,
                                            Rng& rng);

inline constexpr std::int64_t kMaxExactVertices = 7;

/// Exact c_i for every vertex by enumerating all 2^(n(n-1)/2) labeled
/// graphs. Refuses (CapExceeded) for n > 7.
ComponentMeanEstimates exact_component_means(const GraphModel& model);

struct QuantileBaseline {
  double c_star_alpha = 0.0;            // ceil((1-alpha) n)-th smallest c_i
  double c_max = 0.0;                   // max_i c_i
  std::vector<VertexId> near_optimal;   // V*_alpha: vertices with c_i >= c_star_alpha
};

/// Throws InputError when the estimates do not cover all n vertices or
/// alpha is outside (0, 1).
QuantileBaseline quantile_baseline(const ComponentMeanEstimates& estimates, std::int64_t n,
                                   double alpha);

}  // namespace oim
