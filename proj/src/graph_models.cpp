#include "oim/graph_models.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace oim {
namespace {

void check_vertex(std::int64_t n, VertexId v) {
  if (v < 0 || v >= n) {
    std::ostringstream msg;
    msg << "vertex id " << v << " out of range [0, " << n << ")";
    throw InputError(msg.str());
  }
}

void check_square_symmetric(const Matrix& m, const char* what) {
  const std::size_t s = m.size();
  if (s == 0) throw InputError(std::string(what) + " must be non-empty");
  for (const auto& row : m) {
    if (row.size() != s) throw InputError(std::string(what) + " must be square");
  }
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      if (!std::isfinite(m[a][b])) throw InputError(std::string(what) + " has a non-finite entry");
      if (m[a][b] != m[b][a]) throw InputError(std::string(what) + " must be symmetric");
    }
  }
}

double largest_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigen-solver did not converge on " << m.rows() << "x" << m.cols()
        << " matrix (max abs entry " << m.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------- SbmModel

SbmModel::SbmModel(std::vector<std::int64_t> block_sizes, Matrix rates, bool assumes_eq_offdiag)
    : sizes_(std::move(block_sizes)), rates_(std::move(rates)), eq_offdiag_(assumes_eq_offdiag) {
  if (sizes_.empty()) throw InputError("SBM needs at least one block");
  if (rates_.size() != sizes_.size()) {
    throw InputError("SBM rate matrix dimension must equal the number of blocks");
  }
  check_square_symmetric(rates_, "SBM rate matrix");
  for (const auto& row : rates_) {
    for (double k : row) {
      if (!(k > 0.0)) throw InputError("SBM rates must be positive");
    }
  }
  starts_.reserve(sizes_.size());
  for (auto s : sizes_) {
    if (s <= 0) throw InputError("SBM block sizes must be positive");
    starts_.push_back(n_);
    n_ += s;
  }
  if (eq_offdiag_) {
    const int s = blocks();
    for (int l = 0; l < s; ++l) {
      for (int m = 0; m < s; ++m) {
        if (l != m && rates_[l][m] != rates_[0][s > 1 ? 1 : 0]) {
          throw InputError("SBM declared with equal off-diagonal rates, but they differ");
        }
      }
    }
  }
  probs_.assign(sizes_.size(), std::vector<double>(sizes_.size()));
  for (std::size_t l = 0; l < sizes_.size(); ++l) {
    for (std::size_t m = 0; m < sizes_.size(); ++m) {
      probs_[l][m] = std::min(rates_[l][m] / static_cast<double>(n_), 1.0);
    }
  }
}

int SbmModel::block_of(VertexId v) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), v);
  return static_cast<int>(it - starts_.begin()) - 1;
}

bool SbmModel::satisfies_assumption_2() const {
  const int s = blocks();
  if (s < 2) return true;
  for (int l = 0; l < s; ++l) {
    for (int m = 0; m < s; ++m) {
      if (l != m && !(rates_[l][l] > rates_[l][m])) return false;
    }
  }
  return true;
}

double SbmModel::prob(VertexId i, VertexId j) const {
  if (i == j) return 0.0;
  return probs_[block_of(i)][block_of(j)];
}

// ------------------------------------------------------------ ChungLuModel

ChungLuModel::ChungLuModel(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw InputError("Chung-Lu model needs at least one vertex");
  double w_max = 0.0;
  for (double w : w_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("Chung-Lu weights must be positive");
    sum_ += w;
    sq_sum_ += w * w;
    w_max = std::max(w_max, w);
  }
  if (w_.size() > 1 && !(w_max * w_max / static_cast<double>(w_.size()) < 1.0)) {
    std::ostringstream msg;
    msg << "Chung-Lu weights violate max w_i w_j / n < 1 (max weight " << w_max << ", n "
        << w_.size() << ")";
    throw InputError(msg.str());
  }
}

// ---------------------------------------------------------- KroneckerModel

KroneckerModel::KroneckerModel(int depth, double zeta, double beta, double gamma, bool ordered)
    : depth_(depth), zeta_(zeta), beta_(beta), gamma_(gamma), ordered_(ordered) {
  if (depth < 1 || depth > 30) throw InputError("Kronecker depth must be in [1, 30]");
  for (double x : {zeta, beta, gamma}) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("Kronecker seed entries must lie in [0, 1]");
  }
  if (ordered && !(beta <= gamma && gamma <= zeta)) {
    throw InputError("ordered Kronecker model requires beta <= gamma <= zeta");
  }
  mask_ = (std::uint64_t{1} << depth) - 1;
  zeta_pow_.resize(depth + 1);
  beta_pow_.resize(depth + 1);
  gamma_pow_.resize(depth + 1);
  for (int e = 0; e <= depth; ++e) {
    zeta_pow_[e] = std::pow(zeta, e);
    beta_pow_[e] = std::pow(beta, e);
    gamma_pow_[e] = std::pow(gamma, e);
  }
}

// --------------------------------------------------------- GridKernelModel

GridKernelModel::GridKernelModel(std::int64_t n, Matrix grid) : n_(n), grid_(std::move(grid)) {
  if (n < 1) throw InputError("grid kernel model needs n >= 1");
  check_square_symmetric(grid_, "kernel grid");
  for (const auto& row : grid_) {
    for (double g : row) {
      if (g < 0.0) throw InputError("kernel grid entries must be non-negative");
    }
  }
  const int m = resolution();
  probs_.assign(m, std::vector<double>(m));
  for (int c = 0; c < m; ++c) {
    for (int d = 0; d < m; ++d) probs_[c][d] = std::min(grid_[c][d] / static_cast<double>(n_), 1.0);
  }
  // Cell c holds vertices v with cell_of(v) == c; cells may be empty when m > n.
  starts_.assign(m + 1, n_);
  for (VertexId v = n_ - 1; v >= 0; --v) starts_[cell_of(v)] = v;
  for (int c = m - 1; c >= 0; --c) starts_[c] = std::min(starts_[c], starts_[c + 1]);
}

// ------------------------------------------------------------- free functions

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Supercritical: return "supercritical";
    case Regime::NearCritical: return "near_critical";
  }
  return "unknown";
}

std::string model_kind(const GraphModel& model) {
  struct {
    std::string operator()(const SbmModel&) const { return "sbm"; }
    std::string operator()(const ChungLuModel&) const { return "chung_lu"; }
    std::string operator()(const KroneckerModel&) const { return "kronecker"; }
    std::string operator()(const GridKernelModel&) const { return "grid"; }
  } visitor;
  return std::visit(visitor, model);
}

std::int64_t vertex_count(const GraphModel& model) {
  return std::visit([](const auto& m) { return m.n(); }, model);
}

double edge_prob(const GraphModel& model, VertexId i, VertexId j) {
  const std::int64_t n = vertex_count(model);
  check_vertex(n, i);
  check_vertex(n, j);
  return std::visit([&](const auto& m) { return m.prob(i, j); }, model);
}

double expected_degree(const GraphModel& model, VertexId i) {
  check_vertex(vertex_count(model), i);
  struct {
    VertexId i;
    double operator()(const SbmModel& m) const {
      const int l = m.block_of(i);
      double mu = 0.0;
      for (int b = 0; b < m.blocks(); ++b) {
        mu += static_cast<double>(m.block_size(b)) * m.block_prob(l, b);
      }
      return mu - m.block_prob(l, l);
    }
    double operator()(const ChungLuModel& m) const {
      const double w = m.weight(i);
      return w * (m.weight_sum() - w) / static_cast<double>(m.n());
    }
    double operator()(const KroneckerModel& m) const {
      const int l = m.weight(i);
      const int k = m.depth();
      const double all = std::pow(m.zeta() + m.beta(), l) * std::pow(m.beta() + m.gamma(), k - l);
      const double self = std::pow(m.zeta(), l) * std::pow(m.gamma(), k - l);
      return all - self;
    }
    double operator()(const GridKernelModel& m) const {
      const int c = m.cell_of(i);
      double mu = 0.0;
      for (int d = 0; d < m.resolution(); ++d) {
        mu += static_cast<double>(m.cell_size(d)) * m.cell_prob(c, d);
      }
      return mu - m.cell_prob(c, c);
    }
  } visitor{i};
  return std::visit(visitor, model);
}

Criticality criticality(const GraphModel& model, double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("criticality tolerance must be positive");
  struct {
    double operator()(const SbmModel& m) const {
      // K diag(alpha) is similar to the symmetric D^1/2 K D^1/2.
      const int s = m.blocks();
      Eigen::MatrixXd sym(s, s);
      const double n = static_cast<double>(m.n());
      for (int l = 0; l < s; ++l) {
        for (int b = 0; b < s; ++b) {
          const double al = static_cast<double>(m.block_size(l)) / n;
          const double ab = static_cast<double>(m.block_size(b)) / n;
          sym(l, b) = std::sqrt(al) * m.rate(l, b) * std::sqrt(ab);
        }
      }
      return largest_symmetric_eigenvalue(sym);
    }
    double operator()(const ChungLuModel& m) const {
      return m.weight_sq_sum() / static_cast<double>(m.n());
    }
    double operator()(const KroneckerModel& m) const {
      return (m.zeta() + m.beta()) * (m.beta() + m.gamma());
    }
    double operator()(const GridKernelModel& m) const {
      const int r = m.resolution();
      Eigen::MatrixXd g(r, r);
      for (int c = 0; c < r; ++c) {
        for (int d = 0; d < r; ++d) g(c, d) = m.value(c, d) / static_cast<double>(r);
      }
      // Symmetric, so the largest singular value is the largest |eigenvalue|.
      return largest_symmetric_eigenvalue(g);
    }
  } visitor;
  const double norm = std::visit(visitor, model);
  Regime regime = Regime::NearCritical;
  if (norm < 1.0 - tolerance) {
    regime = Regime::Subcritical;
  } else if (norm > 1.0 + tolerance) {
    regime = Regime::Supercritical;
  }
  return Criticality{regime, norm, tolerance};
}

AdjacencyList sample_full_graph(const GraphModel& model, Rng& rng, std::int64_t cap) {
  const std::int64_t n = vertex_count(model);
  if (n > cap) {
    std::ostringstream msg;
    msg << "full-graph sampling refused for n = " << n << " (cap " << cap
        << "); use lazy neighbor probing for large graphs";
    throw CapExceeded(msg.str());
  }
  AdjacencyList adj(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::visit(
      [&](const auto& m) {
        for (VertexId i = 0; i < n; ++i) {
          for (VertexId j = i + 1; j < n; ++j) {
            const double p = m.prob(i, j);
            if (p > 0.0 && unif(rng) < p) {
              adj[static_cast<std::size_t>(i)].push_back(j);
              adj[static_cast<std::size_t>(j)].push_back(i);
            }
          }
        }
      },
      model);
  return adj;
}

SymmetryClasses symmetry_classes(const GraphModel& model) {
  SymmetryClasses out;
  const std::int64_t n = vertex_count(model);
  out.class_of.assign(static_cast<std::size_t>(n), 0);
  auto from_ranges = [&](int count, auto begin_of, auto size_of) {
    for (int c = 0; c < count; ++c) {
      if (size_of(c) == 0) continue;
      const int id = out.count();
      out.representative.push_back(begin_of(c));
      out.size.push_back(size_of(c));
      for (VertexId v = begin_of(c); v < begin_of(c) + size_of(c); ++v) {
        out.class_of[static_cast<std::size_t>(v)] = id;
      }
    }
  };
  if (const auto* sbm = std::get_if<SbmModel>(&model)) {
    from_ranges(sbm->blocks(), [&](int c) { return sbm->block_begin(c); },
                [&](int c) { return sbm->block_size(c); });
  } else if (const auto* grid = std::get_if<GridKernelModel>(&model)) {
    from_ranges(grid->resolution(), [&](int c) { return grid->cell_begin(c); },
                [&](int c) { return grid->cell_size(c); });
  } else if (const auto* cl = std::get_if<ChungLuModel>(&model)) {
    std::map<double, int> seen;
    for (VertexId v = 0; v < n; ++v) {
      auto [it, inserted] = seen.try_emplace(cl->weight(v), out.count());
      if (inserted) {
        out.representative.push_back(v);
        out.size.push_back(0);
      }
      out.class_of[static_cast<std::size_t>(v)] = it->second;
      ++out.size[static_cast<std::size_t>(it->second)];
    }
  } else {
    const auto& kr = std::get<KroneckerModel>(model);
    for (int l = 0; l <= kr.depth(); ++l) {
      out.representative.push_back((VertexId{1} << l) - 1);
      // C(depth, l) strings of weight l.
      double binom = 1.0;
      for (int t = 0; t < l; ++t) binom = binom * (kr.depth() - t) / (t + 1);
      out.size.push_back(static_cast<std::int64_t>(std::llround(binom)));
    }
    for (VertexId v = 0; v < n; ++v) out.class_of[static_cast<std::size_t>(v)] = kr.weight(v);
  }
  return out;
}

std::vector<double> power_law_weights(std::int64_t n, double exponent, double mean_weight) {
  if (n < 1) throw InputError("power-law weights need n >= 1");
  if (!(exponent > 2.0)) throw InputError("power-law exponent must exceed 2");
  if (!(mean_weight > 0.0)) throw InputError("power-law mean weight must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  const double decay = 1.0 / (exponent - 1.0);
  for (std::int64_t i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -decay);
  }
  const double scale = mean_weight * static_cast<double>(n) / std::accumulate(w.begin(), w.end(), 0.0);
  const double cap = 0.99 * std::sqrt(static_cast<double>(n));
  for (double& x : w) x = std::min(x * scale, cap);
  return w;
}

}  // namespace oim
