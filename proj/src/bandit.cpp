#include "oim/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace oim {
namespace {

void require_pulled(std::span<const ArmStats> arms) {
  if (arms.empty()) throw ContractViolation("selection over an empty arm set");
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (arms[a].pulls <= 0) {
      throw ContractViolation("arm " + std::to_string(a) + " selected before initialization");
    }
  }
}

template <class Index>
std::size_t argmax(std::span<const ArmStats> arms, Index index) {
  std::size_t best = 0;
  double best_value = index(arms[0]);
  for (std::size_t a = 1; a < arms.size(); ++a) {
    const double value = index(arms[a]);
    if (value > best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

double safe_log(double t) { return t > 1.0 ? std::log(t) : 0.0; }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "quantile alpha must lie in (0, 1), got " << alpha;
    throw InputError(msg.str());
  }
}

}  // namespace

std::int64_t v0_size(std::int64_t n, double alpha, double horizon) {
  check_alpha(alpha);
  if (!(horizon >= 2.0)) throw InputError("horizon T must be >= 2");
  const std::int64_t size = ceil_tol(std::log(horizon) / std::log(1.0 / (1.0 - alpha)));
  return std::clamp<std::int64_t>(size, 1, n);
}

std::vector<VertexId> sample_without_replacement(std::int64_t n, std::int64_t count, Rng& rng) {
  if (count < 0 || count > n) throw InputError("sample size must lie in [0, n]");
  // Floyd's algorithm: O(count) work, independent of n.
  std::unordered_set<VertexId> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (std::int64_t j = n - count; j < n; ++j) {
    const VertexId t = std::uniform_int_distribution<VertexId>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<VertexId> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> subsample_v0(std::int64_t n, double alpha, double horizon, Rng& rng) {
  return sample_without_replacement(n, v0_size(n, alpha, horizon), rng);
}

std::size_t local_ucb_sub_select(std::span<const ArmStats> arms, double censoring, double t) {
  require_pulled(arms);
  const double lt = safe_log(t);
  return argmax(arms, [&](const ArmStats& s) {
    return s.mean + censoring * std::sqrt(lt / static_cast<double>(s.pulls));
  });
}

std::size_t local_ucb_sup_select(std::span<const ArmStats> arms, double t) {
  require_pulled(arms);
  const double lt = safe_log(t);
  return argmax(arms, [&](const ArmStats& s) {
    return s.mean + std::sqrt(lt / static_cast<double>(s.pulls));
  });
}

double poisson_kl(double mu, double mu_prime) {
  if (!(mu_prime > 0.0)) throw InputError("poisson_kl needs mu' > 0");
  if (!(mu >= 0.0)) throw InputError("poisson_kl needs mu >= 0");
  if (mu == 0.0) return mu_prime;
  return mu_prime - mu + mu * std::log(mu / mu_prime);
}

double kl_ucb_upper(double mu_hat, double budget) {
  if (!(mu_hat >= 0.0)) throw InputError("kl_ucb_upper needs mu_hat >= 0");
  if (!(budget >= 0.0)) throw InputError("kl_ucb_upper needs budget >= 0");
  if (budget == 0.0) return mu_hat;
  if (mu_hat == 0.0) return budget;
  // d(mu_hat, U) >= (U - mu_hat)^2 / (2U) puts the root below this bound.
  double lo = mu_hat;
  double hi = mu_hat + budget + std::sqrt(2.0 * mu_hat * budget) + 1.0;
  constexpr double kTolerance = 1e-9;
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= kTolerance) return lo + 0.5 * (hi - lo);
    const double mid = lo + 0.5 * (hi - lo);
    if (poisson_kl(mu_hat, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream msg;
  msg << "kl_ucb_upper bisection did not converge (mu_hat " << mu_hat << ", budget " << budget
      << ", bracket [" << lo << ", " << hi << "])";
  throw NumericalError(msg.str());
}

std::size_t d_ucb_select(std::span<const ArmStats> arms, double t, double scale) {
  require_pulled(arms);
  const double explore = scale * safe_log(t);
  return argmax(arms, [&](const ArmStats& s) {
    return kl_ucb_upper(s.mean, explore / static_cast<double>(s.pulls));
  });
}

std::int64_t default_k_of_n(std::int64_t n) {
  if (n < 2) throw InputError("k(n) needs n >= 2");
  const double l = std::log2(static_cast<double>(n));
  return std::max<std::int64_t>(1, ceil_tol(l * l));
}

EpisodeState EpisodeState::start(double horizon) {
  if (!(horizon >= 2.0)) throw InputError("horizon T must be >= 2");
  EpisodeState s;
  s.level = std::log(horizon);
  return s;
}

double episode_threshold(double horizon, std::int64_t clock) {
  return 1.0 / horizon + std::sqrt(std::log(horizon) / (2.0 * static_cast<double>(clock + 1)));
}

EpisodeOutcome ucb_double_step(EpisodeState& state, std::span<ArmStats> arms, bool exceeded,
                               double horizon) {
  ++state.clock;
  if (exceeded) ++state.exceed_count;
  state.p_hat = static_cast<double>(state.exceed_count) / static_cast<double>(state.clock);
  const bool initialized =
      std::all_of(arms.begin(), arms.end(), [](const ArmStats& s) { return s.pulls > 0; });
  if (!initialized || state.p_hat <= episode_threshold(horizon, state.clock)) {
    return EpisodeOutcome::Continue;
  }
  ++state.episode;
  state.level *= 2.0;
  state.clock = 0;
  state.exceed_count = 0;
  state.p_hat = 0.0;
  std::fill(arms.begin(), arms.end(), ArmStats{});
  return EpisodeOutcome::NewEpisode;
}

GrowingActionSet GrowingActionSet::create(std::int64_t n, double alpha, double beta) {
  check_alpha(alpha);
  if (!(beta >= 2.0)) throw InputError("beta must be >= 2");
  if (n < 1) throw InputError("action set needs n >= 1");
  GrowingActionSet s;
  s.beta = beta;
  s.alpha = alpha;
  s.n = n;
  return s;
}

std::int64_t GrowingActionSet::batch_size() const {
  const std::int64_t size = ceil_tol(std::log(beta) / std::log(1.0 / (1.0 - alpha)));
  return std::clamp<std::int64_t>(size, 1, n);
}

bool d_ucb_double_step(GrowingActionSet& state, std::int64_t t, Rng& rng) {
  bool crossed = false;
  while (static_cast<double>(t) >= state.next_boundary) {
    ++state.period;
    const auto batch = sample_without_replacement(state.n, state.batch_size(), rng);
    std::vector<VertexId> merged;
    merged.reserve(state.action_set.size() + batch.size());
    std::set_union(state.action_set.begin(), state.action_set.end(), batch.begin(), batch.end(),
                   std::back_inserter(merged));
    state.action_set = std::move(merged);
    state.next_boundary = std::pow(state.beta, state.period);
    crossed = true;
  }
  return crossed;
}

}  // namespace oim
