#include "oim/branching.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oim {
namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  const auto s = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(s, s);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) out(a, b) = m[a][b];
  }
  return out;
}

std::vector<double> apply_phi(const Matrix& rates, const std::vector<double>& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += rates[i][j] * a[j];
    out[i] = -std::expm1(-s);
  }
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

BranchingModel::BranchingModel(Matrix rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw InputError("branching model needs at least one type");
  for (const auto& row : rates_) {
    if (row.size() != rates_.size()) throw InputError("branching rate matrix must be square");
    for (double r : row) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("branching rates must be >= 0");
    }
  }
}

BranchingModel BranchingModel::from_graph(const GraphModel& model, RateRule rule) {
  const SymmetryClasses sym = symmetry_classes(model);
  const int types = sym.count();
  const std::int64_t n = vertex_count(model);
  Matrix rates(types, std::vector<double>(types, 0.0));
  std::visit(
      [&](const auto& m) {
        for (int c = 0; c < types; ++c) {
          const VertexId rep = sym.representative[c];
          for (VertexId j = 0; j < n; ++j) {
            const double p = m.prob(rep, j);
            if (rule == RateRule::Dominating && p >= 1.0) {
              throw InputError("dominating offspring rate is infinite for p_ij = 1");
            }
            rates[c][sym.class_of[static_cast<std::size_t>(j)]] +=
                rule == RateRule::Linear ? p : -std::log1p(-p);
          }
        }
      },
      model);
  BranchingModel out(std::move(rates));
  out.class_of_ = sym.class_of;
  return out;
}

double BranchingModel::spectral_radius() const {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(rates_), false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen-solver did not converge on the offspring matrix");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ProgenyResult total_progeny(const BranchingModel& model, int root_type, std::int64_t cap,
                            Rng& rng) {
  if (cap < 1) throw InputError("progeny cap must be >= 1");
  if (root_type < 0 || root_type >= model.types()) throw InputError("root type out of range");
  const int types = model.types();
  std::vector<std::int64_t> generation(static_cast<std::size_t>(types), 0);
  std::vector<std::int64_t> next(static_cast<std::size_t>(types), 0);
  generation[static_cast<std::size_t>(root_type)] = 1;
  std::int64_t total = 1;
  if (total > cap) return Exceeded{cap};
  while (true) {
    std::int64_t born = 0;
    for (int b = 0; b < types; ++b) {
      double mean = 0.0;
      for (int a = 0; a < types; ++a) {
        mean += static_cast<double>(generation[static_cast<std::size_t>(a)]) * model.rate(a, b);
      }
      const std::int64_t k =
          mean > 0.0 ? std::poisson_distribution<std::int64_t>(mean)(rng) : std::int64_t{0};
      next[static_cast<std::size_t>(b)] = k;
      born += k;
    }
    if (born == 0) return Finite{total};
    total += born;
    if (total > cap) return Exceeded{cap};
    generation.swap(next);
  }
}

SurvivalResult survival_fixed_point(const BranchingModel& model, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InputError("fixed-point tolerance must be positive");
  SurvivalResult out;
  out.rho.assign(static_cast<std::size_t>(model.types()), 1.0);
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<double> next = apply_phi(model.rates(), out.rho);
    const double step = sup_distance(next, out.rho);
    out.rho = std::move(next);
    out.iterations = iter;
    if (step < tol) {
      out.residual = sup_distance(apply_phi(model.rates(), out.rho), out.rho);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "survival fixed point did not converge in " << max_iter << " iterations; last iterate:";
  for (double r : out.rho) msg << ' ' << r;
  throw NumericalError(msg.str());
}

std::vector<double> expected_progeny_linear(const BranchingModel& model) {
  const double radius = model.spectral_radius();
  if (!(radius < 1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "expected progeny is infinite or undefined: offspring spectral radius " << radius
        << " is not below 1 (process not subcritical)";
    throw InputError(msg.str());
  }
  const Eigen::MatrixXd r = to_eigen(model.rates());
  const auto s = r.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(s, s) - r;
  const Eigen::VectorXd x = system.partialPivLu().solve(Eigen::VectorXd::Ones(s));
  return std::vector<double>(x.data(), x.data() + s);
}

}  // namespace oim
