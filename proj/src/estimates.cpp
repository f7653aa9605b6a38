#include "oim/estimates.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "oim/explorer.hpp"
#include "oim/stats.hpp"

namespace oim {
namespace {

struct Task {
  std::size_t node;
  std::int64_t count;
};

std::vector<Task> make_tasks(std::size_t nodes, std::int64_t samples) {
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::int64_t done = 0; done < samples; done += kEstimateChunk) {
      tasks.push_back({i, std::min(kEstimateChunk, samples - done)});
    }
  }
  return tasks;
}

IntMoments run_task(ComponentExplorer& explorer, VertexId root, std::int64_t count,
                    std::uint64_t seed, std::uint64_t task) {
  Rng rng = make_stream(seed, task);
  IntMoments m;
  for (std::int64_t s = 0; s < count; ++s) m.add(explorer.component_size(root, rng));
  return m;
}

ComponentMeanEstimates collect(const std::vector<VertexId>& nodes, std::int64_t samples,
                               const std::vector<Task>& tasks,
                               const std::vector<IntMoments>& results) {
  std::vector<IntMoments> per_node(nodes.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) per_node[tasks[t].node].merge(results[t]);
  ComponentMeanEstimates out;
  out.method = EstimateMethod::MonteCarlo;
  out.samples = samples;
  out.nodes = nodes;
  for (const auto& m : per_node) {
    out.mean.push_back(m.mean());
    out.std_error.push_back(m.std_error());
  }
  return out;
}

void check_request(const GraphModel& model, const std::vector<VertexId>& nodes,
                   std::int64_t samples) {
  if (samples < 1) throw InputError("estimation needs samples >= 1");
  const std::int64_t n = vertex_count(model);
  if (n > kDefaultExhaustiveCap) {
    std::ostringstream msg;
    msg << "component-mean estimation needs exhaustive exploration, refused for n = " << n
        << " (cap " << kDefaultExhaustiveCap << ")";
    throw CapExceeded(msg.str());
  }
  for (VertexId v : nodes) {
    if (v < 0 || v >= n) throw InputError("estimation node out of range");
  }
}

}  // namespace

std::string to_string(EstimateMethod m) {
  return m == EstimateMethod::MonteCarlo ? "monte_carlo" : "exact_enumeration";
}

bool ComponentMeanEstimates::covers_all(std::int64_t n) const {
  if (!class_of.empty()) return static_cast<std::int64_t>(class_of.size()) == n;
  if (static_cast<std::int64_t>(nodes.size()) != n) return false;
  std::vector<VertexId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  for (std::int64_t v = 0; v < n; ++v) {
    if (sorted[static_cast<std::size_t>(v)] != v) return false;
  }
  return true;
}

std::optional<double> ComponentMeanEstimates::mean_of(VertexId v) const {
  if (!class_of.empty()) {
    if (v < 0 || v >= static_cast<VertexId>(class_of.size())) return std::nullopt;
    return mean[static_cast<std::size_t>(class_of[static_cast<std::size_t>(v)])];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == v) return mean[i];
  }
  return std::nullopt;
}

ComponentMeanEstimates estimate_component_means(const GraphModel& model,
                                                const std::vector<VertexId>& nodes,
                                                std::int64_t samples, Rng& rng) {
  check_request(model, nodes, samples);
  const std::uint64_t seed = rng();
  const EdgeSampler sampler(model);
  const std::vector<Task> tasks = make_tasks(nodes.size(), samples);
  std::vector<IntMoments> results(tasks.size());
#pragma omp parallel
  {
    ComponentExplorer explorer(sampler);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      results[t] = run_task(explorer, nodes[tasks[t].node], tasks[t].count, seed, t);
    }
  }
  return collect(nodes, samples, tasks, results);
}

ComponentMeanEstimates estimate_component_means_serial(const GraphModel& model,
                                                       const std::vector<VertexId>& nodes,
                                                       std::int64_t samples, Rng& rng) {
  check_request(model, nodes, samples);
  const std::uint64_t seed = rng();
  const EdgeSampler sampler(model);
  const std::vector<Task> tasks = make_tasks(nodes.size(), samples);
  std::vector<IntMoments> results(tasks.size());
  ComponentExplorer explorer(sampler);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    results[t] = run_task(explorer, nodes[tasks[t].node], tasks[t].count, seed, t);
  }
  return collect(nodes, samples, tasks, results);
}

ComponentMeanEstimates estimate_class_means(const GraphModel& model, std::int64_t samples,
                                            Rng& rng) {
  SymmetryClasses sym = symmetry_classes(model);
  ComponentMeanEstimates out = estimate_component_means(model, sym.representative, samples, rng);
  out.class_of = std::move(sym.class_of);
  return out;
}

ComponentMeanEstimates exact_component_means(const GraphModel& model) {
  const std::int64_t n = vertex_count(model);
  if (n > kMaxExactVertices) {
    std::ostringstream msg;
    msg << "exact enumeration refused for n = " << n << " (limit " << kMaxExactVertices << ")";
    throw CapExceeded(msg.str());
  }
  struct Pair {
    int a, b;
    double p;
  };
  std::vector<Pair> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b, edge_prob(model, a, b)});
  }
  const std::size_t m = pairs.size();
  std::vector<double> expected(static_cast<std::size_t>(n), 0.0);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n));
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double weight = 1.0;
    for (std::size_t e = 0; e < m && weight > 0.0; ++e) {
      weight *= (mask >> e & 1U) ? pairs[e].p : 1.0 - pairs[e].p;
    }
    if (weight == 0.0) continue;
    std::iota(parent.begin(), parent.end(), 0);
    std::fill(size.begin(), size.end(), 1);
    for (std::size_t e = 0; e < m; ++e) {
      if (!(mask >> e & 1U)) continue;
      int ra = find(pairs[e].a), rb = find(pairs[e].b);
      if (ra == rb) continue;
      if (size[ra] < size[rb]) std::swap(ra, rb);
      parent[rb] = ra;
      size[ra] += size[rb];
    }
    for (int v = 0; v < n; ++v) expected[v] += weight * size[find(v)];
  }
  ComponentMeanEstimates out;
  out.method = EstimateMethod::ExactEnumeration;
  out.samples = 0;
  out.nodes.resize(static_cast<std::size_t>(n));
  std::iota(out.nodes.begin(), out.nodes.end(), VertexId{0});
  out.mean = std::move(expected);
  out.std_error.assign(static_cast<std::size_t>(n), 0.0);
  return out;
}

QuantileBaseline quantile_baseline(const ComponentMeanEstimates& estimates, std::int64_t n,
                                   double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("quantile alpha must lie in (0, 1)");
  if (n < 1 || !estimates.covers_all(n)) {
    throw InputError("component-mean estimates do not cover all vertices");
  }
  // Per-vertex value, expanded from classes when needed.
  std::vector<double> value(static_cast<std::size_t>(n));
  if (!estimates.class_of.empty()) {
    for (std::int64_t v = 0; v < n; ++v) {
      value[static_cast<std::size_t>(v)] =
          estimates.mean[static_cast<std::size_t>(estimates.class_of[static_cast<std::size_t>(v)])];
    }
  } else {
    for (std::size_t i = 0; i < estimates.nodes.size(); ++i) {
      value[static_cast<std::size_t>(estimates.nodes[i])] = estimates.mean[i];
    }
  }
  std::vector<double> sorted = value;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t rank =
      std::clamp<std::int64_t>(ceil_tol((1.0 - alpha) * static_cast<double>(n)), 1, n);
  QuantileBaseline out;
  out.c_star_alpha = sorted[static_cast<std::size_t>(rank - 1)];
  out.c_max = sorted.back();
  for (std::int64_t v = 0; v < n; ++v) {
    if (value[static_cast<std::size_t>(v)] >= out.c_star_alpha) out.near_optimal.push_back(v);
  }
  return out;
}

}  // namespace oim
