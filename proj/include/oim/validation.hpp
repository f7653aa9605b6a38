#pragma once

// Property suites checking the library against independent oracles. Each
// check reports the measured quantity against its bound.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oim {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

using CheckList = std::vector<CheckResult>;

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  /// Multiplies every sample count (floored at 1000); 1 is full size.
  double scale = 1.0;
};

const std::vector<std::string>& suite_names();

/// Runs one suite (dominance, tails, oracles, klucb, monotonicity) or all.
/// Throws InputError for an unknown suite name.
CheckList run_suite(std::string_view suite, const ValidationOptions& options = {});

// Individual checks, shared with the acceptance tests.

/// Monte-Carlo c_i against exact enumeration on random models with n <= 6.
CheckList check_oracle_agreement(int models, std::int64_t samples, std::uint64_t seed);
/// ER(3, 1/2): every c_i equals 2.25 exactly.
CheckList check_er3_exact();
/// poisson_kl(mu, kl_ucb_upper(mu, b)) == b over a grid x grid of
/// [0, 100] x (0, 50], and kl_ucb_upper(1, e - 2) == e.
CheckList check_klucb_inversion(int grid);
/// kl_ucb_upper is non-decreasing in both arguments on a random grid.
CheckList check_klucb_monotonicity(int points, std::uint64_t seed);
/// Degree MGF below the Poisson MGF, five vertices of n = 100 models.
CheckList check_poisson_dominance(std::int64_t draws, std::uint64_t seed);
/// Linear fit of log P(|C| > u), u in [1, 20], on subcritical ER(n, c).
CheckList check_subcritical_tail(std::int64_t n, double c, std::int64_t samples, std::uint64_t seed);
/// argmax of mu over classes equals argmax of c, separated by 3 sigma.
CheckList check_degree_influence(std::int64_t samples, std::uint64_t seed);
/// Pull counts of kl-UCB on a Poisson bandit against the theoretical bound.
CheckList check_pull_bound(std::int64_t horizon, int replications, std::uint64_t seed);
/// c_i / n against rho_i sum_j rho_j / n on a supercritical SBM.
CheckList check_supercritical_structure(std::int64_t samples, std::uint64_t seed);
/// Component size stochastically below branching progeny (n <= 6).
CheckList check_component_progeny_dominance(std::int64_t samples, std::uint64_t seed);
/// Expected progeny minus c_i is below 5/n and shrinks with n.
CheckList check_mean_gap(std::int64_t samples, std::uint64_t seed);
/// Finite progeny of a supercritical process matches its dual.
CheckList check_branching_duality(std::int64_t samples, std::uint64_t seed);
/// Lazy neighbor sampling matches degrees in fully sampled graphs.
CheckList check_lazy_eager(std::int64_t draws, std::uint64_t seed);
/// Kronecker degree ordering by string weight and criticality scaling.
CheckList check_structural_monotonicity();

}  // namespace oim
