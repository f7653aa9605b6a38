#pragma once

// Edge-probability models of sparse inhomogeneous random graphs.
//
// A model is a closed-form description of p_ij; no adjacency is ever stored.
// All models are immutable after construction and may be shared across
// threads. Vertices are 0-based.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oim/common.hpp"
#include "oim/random.hpp"

namespace oim {

using Matrix = std::vector<std::vector<double>>;

/// Stochastic block model: p_ij = min(K[l][m] / n, 1) for i in block l, j in
/// block m. Blocks are contiguous vertex ranges in the order given.
class SbmModel {
 public:
  /// Throws InputError unless K is a symmetric S x S matrix of positive
  /// entries and every block size is positive. When `assumes_eq_offdiag` is
  /// set, all off-diagonal entries must be equal.
  SbmModel(std::vector<std::int64_t> block_sizes, Matrix rates, bool assumes_eq_offdiag = false);

  std::int64_t n() const { return n_; }
  int blocks() const { return static_cast<int>(sizes_.size()); }
  std::int64_t block_size(int l) const { return sizes_[l]; }
  VertexId block_begin(int l) const { return starts_[l]; }
  int block_of(VertexId v) const;
  double rate(int l, int m) const { return rates_[l][m]; }
  const Matrix& rates() const { return rates_; }
  const std::vector<std::int64_t>& block_sizes() const { return sizes_; }
  bool assumes_eq_offdiag() const { return eq_offdiag_; }

  /// Within-block rates strictly exceed the common between-block rate.
  bool satisfies_assumption_2() const;

  double block_prob(int l, int m) const { return probs_[l][m]; }
  double prob(VertexId i, VertexId j) const;

 private:
  std::vector<std::int64_t> sizes_;
  std::vector<VertexId> starts_;
  Matrix rates_;
  Matrix probs_;
  bool eq_offdiag_;
  std::int64_t n_ = 0;
};

/// Rank-1 (Chung–Lu) model: p_ij = min(w_i w_j / n, 1).
class ChungLuModel {
 public:
  /// Throws InputError unless all weights are positive and
  /// max_i,j w_i w_j / n < 1.
  explicit ChungLuModel(std::vector<double> weights);

  std::int64_t n() const { return static_cast<std::int64_t>(w_.size()); }
  double weight(VertexId i) const { return w_[static_cast<std::size_t>(i)]; }
  std::span<const double> weights() const { return w_; }
  double weight_sum() const { return sum_; }
  double weight_sq_sum() const { return sq_sum_; }

  double prob(VertexId i, VertexId j) const {
    if (i == j) return 0.0;
    const double p = w_[static_cast<std::size_t>(i)] * w_[static_cast<std::size_t>(j)] / static_cast<double>(n());
    return p < 1.0 ? p : 1.0;
  }

 private:
  std::vector<double> w_;
  double sum_ = 0.0;
  double sq_sum_ = 0.0;
};

/// Kronecker graph on n = 2^depth vertices. Vertex i is identified with the
/// binary string of its low `depth` bits; p_ij = zeta^<s_i,s_j> *
/// gamma^<1-s_i,1-s_j> * beta^(rest). No 1/n scaling is applied.
class KroneckerModel {
 public:
  /// `ordered` additionally requires beta <= gamma <= zeta.
  KroneckerModel(int depth, double zeta, double beta, double gamma, bool ordered = false);

  std::int64_t n() const { return std::int64_t{1} << depth_; }
  int depth() const { return depth_; }
  double zeta() const { return zeta_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  bool ordered() const { return ordered_; }

  /// Number of ones in the vertex's string.
  int weight(VertexId i) const { return std::popcount(static_cast<std::uint64_t>(i)); }

  double prob(VertexId i, VertexId j) const {
    if (i == j) return 0.0;
    const auto a = static_cast<std::uint64_t>(i);
    const auto b = static_cast<std::uint64_t>(j);
    const int ones = std::popcount(a & b);
    const int zeros = std::popcount(~(a | b) & mask_);
    return zeta_pow_[ones] * gamma_pow_[zeros] * beta_pow_[depth_ - ones - zeros];
  }

 private:
  int depth_;
  double zeta_, beta_, gamma_;
  bool ordered_;
  std::uint64_t mask_;
  std::vector<double> zeta_pow_, beta_pow_, gamma_pow_;
};

/// Discretized kernel: vertex v (0-based) falls in cell ceil((v+1) m / n) - 1
/// and p_ij = min(grid[c_i][c_j] / n, 1).
class GridKernelModel {
 public:
  GridKernelModel(std::int64_t n, Matrix grid);

  std::int64_t n() const { return n_; }
  int resolution() const { return static_cast<int>(grid_.size()); }
  int cell_of(VertexId v) const {
    const auto m = static_cast<std::int64_t>(grid_.size());
    return static_cast<int>(((v + 1) * m + n_ - 1) / n_ - 1);
  }
  VertexId cell_begin(int c) const { return starts_[c]; }
  std::int64_t cell_size(int c) const { return starts_[c + 1] - starts_[c]; }
  double value(int c, int d) const { return grid_[c][d]; }
  const Matrix& grid() const { return grid_; }
  double cell_prob(int c, int d) const { return probs_[c][d]; }

  double prob(VertexId i, VertexId j) const {
    if (i == j) return 0.0;
    return probs_[cell_of(i)][cell_of(j)];
  }

 private:
  std::int64_t n_;
  Matrix grid_;
  Matrix probs_;
  std::vector<VertexId> starts_;
};

using GraphModel = std::variant<SbmModel, ChungLuModel, KroneckerModel, GridKernelModel>;

enum class Regime { Subcritical, Supercritical, NearCritical };

struct Criticality {
  Regime regime;
  double operator_norm;
  double tolerance;
};

std::string to_string(Regime r);
std::string model_kind(const GraphModel& model);
std::int64_t vertex_count(const GraphModel& model);

/// p_ij; 0 on the diagonal. Throws InputError for out-of-range ids.
double edge_prob(const GraphModel& model, VertexId i, VertexId j);

/// mu_i = sum_{j != i} p_ij, in closed form per model.
double expected_degree(const GraphModel& model, VertexId i);

/// Operator-norm surrogate and regime. NearCritical when within `tolerance`
/// of 1. Throws NumericalError if the eigen-solver fails.
Criticality criticality(const GraphModel& model, double tolerance = 0.05);

/// Neighbors of `i` in one fresh realization (sorted ascending).
std::vector<VertexId> sample_neighbors(const GraphModel& model, VertexId i, Rng& rng);

using AdjacencyList = std::vector<std::vector<VertexId>>;

inline constexpr std::int64_t kDefaultFullGraphCap = 100000;

/// Samples every unordered pair once. Refuses (CapExceeded) above `cap`.
AdjacencyList sample_full_graph(const GraphModel& model, Rng& rng,
                                std::int64_t cap = kDefaultFullGraphCap);

/// Partition of the vertices into classes of exchangeable vertices: SBM
/// blocks, grid cells, Chung–Lu equal-weight groups, Kronecker string
/// weights. Any vertex permutation preserving classes is a model
/// automorphism, so c_i and mu_i are class functions.
struct SymmetryClasses {
  std::vector<int> class_of;             // size n
  std::vector<VertexId> representative;  // lowest vertex id of each class
  std::vector<std::int64_t> size;
  int count() const { return static_cast<int>(representative.size()); }
};

SymmetryClasses symmetry_classes(const GraphModel& model);

/// Chung–Lu weights following a power law with the given exponent (> 2),
/// scaled to the requested mean weight and capped so that w_i w_j / n < 1.
std::vector<double> power_law_weights(std::int64_t n, double exponent, double mean_weight);

}  // namespace oim
