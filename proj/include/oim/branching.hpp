#pragma once

// Multitype Poisson Galton–Watson processes: the oracle for component
// tails, survival probabilities and expected progeny.

#include <cstdint>
#include <variant>
#include <vector>

#include "oim/graph_models.hpp"
#include "oim/random.hpp"

namespace oim {

/// Offspring rate attached to an edge probability p when reducing a graph:
/// Linear uses p itself, Dominating uses -log(1 - p), the smallest Poisson
/// rate whose law stochastically dominates Bernoulli(p).
enum class RateRule { Linear, Dominating };

/// An individual of type a has Poisson(rate(a, b)) children of type b.
class BranchingModel {
 public:
  /// Throws InputError unless `rates` is square with non-negative entries.
  explicit BranchingModel(Matrix rates);

  /// Offspring process of a graph model reduced to its symmetry classes:
  /// rate(c, d) = sum over j in class d of p_{rep(c), j}. The graph vertex
  /// v has branching type class_of()[v]. Dominating refuses p_ij = 1.
  static BranchingModel from_graph(const GraphModel& model, RateRule rule = RateRule::Linear);

  int types() const { return static_cast<int>(rates_.size()); }
  double rate(int a, int b) const { return rates_[a][b]; }
  const Matrix& rates() const { return rates_; }
  /// Vertex -> type map when built from a graph; empty otherwise.
  const std::vector<int>& class_of() const { return class_of_; }

  /// Spectral radius of the mean offspring matrix.
  double spectral_radius() const;

 private:
  Matrix rates_;
  std::vector<int> class_of_;
};

struct Finite {
  std::int64_t total;
};
struct Exceeded {
  std::int64_t cap;
};
using ProgenyResult = std::variant<Finite, Exceeded>;

inline constexpr std::int64_t kDefaultProgenyCap = 100000;

/// Total progeny (root included) simulated generation by generation, one
/// Poisson draw per (parent type, child type) with summed rates. Exceeded
/// once more than `cap` individuals have been born.
ProgenyResult total_progeny(const BranchingModel& model, int root_type, std::int64_t cap,
                            Rng& rng);

struct SurvivalResult {
  std::vector<double> rho;
  int iterations = 0;
  double residual = 0.0;  // sup-norm of Phi(rho) - rho
};

/// Maximal fixed point of Phi(a) = 1 - exp(-R a), iterated downwards from
/// the all-ones vector until the sup-norm step falls below `tol`. Throws
/// NumericalError after `max_iter` iterations.
SurvivalResult survival_fixed_point(const BranchingModel& model, double tol = 1e-12,
                                    int max_iter = 1000000);

/// Expected total progeny x = (I - R)^{-1} e. Refuses (InputError) unless
/// the spectral radius of R is below 1.
std::vector<double> expected_progeny_linear(const BranchingModel& model);

}  // namespace oim
