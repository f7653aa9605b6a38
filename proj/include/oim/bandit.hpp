#pragma once

// Index computations and state transitions of the learning algorithms.
// Everything here is a deterministic function of its arguments; ties go to
// the lowest arm index, and arms are kept sorted by vertex id, so ties go to
// the lowest vertex id.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "oim/common.hpp"
#include "oim/random.hpp"

namespace oim {

struct ArmStats {
  std::int64_t pulls = 0;
  double sum = 0.0;
  double mean = 0.0;

  void add(double observation) {
    ++pulls;
    sum += observation;
    mean = sum / static_cast<double>(pulls);
  }
};

/// |V0| = min(ceil(log T / log(1/(1-alpha))), n).
std::int64_t v0_size(std::int64_t n, double alpha, double horizon);

/// Uniform sample without replacement of v0_size(n, alpha, T) vertices,
/// sorted ascending. Throws InputError unless 0 < alpha < 1 and T >= 2.
std::vector<VertexId> subsample_v0(std::int64_t n, double alpha, double horizon, Rng& rng);

/// Uniform sample of `count` distinct vertices out of n, sorted ascending.
std::vector<VertexId> sample_without_replacement(std::int64_t n, std::int64_t count, Rng& rng);

/// Censored-size UCB: argmax mean + K sqrt(log t / N).
/// Throws ContractViolation if an arm was never pulled.
std::size_t local_ucb_sub_select(std::span<const ArmStats> arms, double censoring, double t);

/// Indicator UCB: argmax mean + sqrt(log t / N).
std::size_t local_ucb_sup_select(std::span<const ArmStats> arms, double t);

/// Poisson divergence d(mu, mu') = mu' - mu + mu log(mu / mu'), with
/// d(0, mu') = mu'. Throws InputError unless mu >= 0 and mu' > 0.
double poisson_kl(double mu, double mu_prime);

/// sup{ U : d(mu_hat, U) <= budget }, by bisection to 1e-9.
/// Throws NumericalError if 200 halvings do not reach the tolerance.
double kl_ucb_upper(double mu_hat, double budget);

/// kl-UCB over Poisson divergence with exploration budget scale * log t / N.
std::size_t d_ucb_select(std::span<const ArmStats> arms, double t, double scale = 3.0);

/// Default diverging censoring level ceil(log2(n)^2).
std::int64_t default_k_of_n(std::int64_t n);

/// Episode bookkeeping of the censoring-level doubling scheme.
struct EpisodeState {
  int episode = 0;              // q
  double level = 0.0;           // K_q = 2^q log T
  std::int64_t clock = 0;       // t_q, probes in the current episode
  std::int64_t exceed_count = 0;
  double p_hat = 0.0;

  static EpisodeState start(double horizon);
  std::int64_t probe_level() const { return ceil_tol(level); }
};

enum class EpisodeOutcome { Continue, NewEpisode };

/// Exceedance threshold 1/T + sqrt(ln T / (2 (t_q + 1))).
double episode_threshold(double horizon, std::int64_t clock);

/// Records one probe of the current episode. Once every arm has been pulled
/// in this episode, ends the episode when p_hat exceeds the threshold: the
/// level doubles and the episode clock, exceedance count and all arm
/// statistics are reset.
EpisodeOutcome ucb_double_step(EpisodeState& state, std::span<ArmStats> arms, bool exceeded,
                               double horizon);

/// Action set of the horizon-doubling kl-UCB: period k covers rounds
/// [beta^(k-1), beta^k) and adds ceil(log beta / log(1/(1-alpha))) fresh
/// uniform vertices.
struct GrowingActionSet {
  double beta = 2.0;
  double alpha = 0.5;
  std::int64_t n = 0;
  int period = 0;
  double next_boundary = 1.0;
  std::vector<VertexId> action_set;  // V_k, sorted

  static GrowingActionSet create(std::int64_t n, double alpha, double beta);
  std::int64_t batch_size() const;
};

/// Advances to round t. Returns true if at least one period boundary was
/// crossed, in which case V_k has grown and learner statistics must be
/// reset.
bool d_ucb_double_step(GrowingActionSet& state, std::int64_t t, Rng& rng);

}  // namespace oim
