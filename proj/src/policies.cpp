#include "oim/policies.hpp"

#include <algorithm>
#include <sstream>

namespace oim {
namespace {

std::vector<VertexId> checked_arms(std::vector<VertexId> arms) {
  if (arms.empty()) throw InputError("a learner needs at least one arm");
  std::sort(arms.begin(), arms.end());
  if (std::adjacent_find(arms.begin(), arms.end()) != arms.end()) {
    throw InputError("arm set contains duplicate vertices");
  }
  return arms;
}

// Initialization replays each arm once, in vertex order.
std::optional<std::size_t> first_unpulled(std::span<const ArmStats> stats) {
  for (std::size_t a = 0; a < stats.size(); ++a) {
    if (stats[a].pulls == 0) return a;
  }
  return std::nullopt;
}

}  // namespace

// ----------------------------------------------------------- LocalUcbSub

LocalUcbSubcritical::LocalUcbSubcritical(std::vector<VertexId> arms, double censoring)
    : arms_(checked_arms(std::move(arms))), stats_(arms_.size()), censoring_(censoring) {
  if (!(censoring >= 1.0)) throw InputError("censoring level K must be >= 1");
}

VertexId LocalUcbSubcritical::select(std::int64_t, Rng&) {
  auto init = first_unpulled(stats_);
  last_ = init ? *init : local_ucb_sub_select(stats_, censoring_, static_cast<double>(rounds_));
  return arms_[last_];
}

FeedbackKind LocalUcbSubcritical::feedback() const {
  return FeedbackKind::censored(ceil_tol(censoring_));
}

void LocalUcbSubcritical::observe(const RoundProbe& probe) {
  stats_[last_].add(probe.observation);
  ++rounds_;
}

// -------------------------------------------------------------- UcbDouble

UcbDouble::UcbDouble(std::vector<VertexId> arms, double horizon)
    : arms_(checked_arms(std::move(arms))),
      stats_(arms_.size()),
      episode_(EpisodeState::start(horizon)),
      horizon_(horizon) {}

VertexId UcbDouble::select(std::int64_t, Rng&) {
  // The index uses log T, not log t.
  auto init = first_unpulled(stats_);
  last_ = init ? *init : local_ucb_sub_select(stats_, episode_.level, horizon_);
  return arms_[last_];
}

FeedbackKind UcbDouble::feedback() const {
  return FeedbackKind::censored(episode_.probe_level());
}

void UcbDouble::observe(const RoundProbe& probe) {
  stats_[last_].add(probe.observation);
  ucb_double_step(episode_, stats_, probe.truncated, horizon_);
}

// ---------------------------------------------------------- LocalUcbSup

LocalUcbSupercritical::LocalUcbSupercritical(std::vector<VertexId> arms, std::int64_t level)
    : arms_(checked_arms(std::move(arms))), stats_(arms_.size()), level_(level) {
  if (level < 1) throw InputError("exceedance level k(n) must be >= 1");
}

VertexId LocalUcbSupercritical::select(std::int64_t, Rng&) {
  auto init = first_unpulled(stats_);
  last_ = init ? *init : local_ucb_sup_select(stats_, static_cast<double>(rounds_));
  return arms_[last_];
}

FeedbackKind LocalUcbSupercritical::feedback() const { return FeedbackKind::exceed(level_); }

void LocalUcbSupercritical::observe(const RoundProbe& probe) {
  if (probe.observation != 0.0 && probe.observation != 1.0) {
    std::ostringstream msg;
    msg << "indicator learner received observation " << probe.observation;
    throw ContractViolation(msg.str());
  }
  stats_[last_].add(probe.observation);
  ++rounds_;
}

// ------------------------------------------------------------------- DUcb

DUcb::DUcb(std::vector<VertexId> arms, double exploration_scale)
    : arms_(checked_arms(std::move(arms))), stats_(arms_.size()), scale_(exploration_scale) {
  if (!(exploration_scale > 0.0)) throw InputError("exploration scale must be positive");
}

VertexId DUcb::select(std::int64_t, Rng&) {
  auto init = first_unpulled(stats_);
  last_ = init ? *init : d_ucb_select(stats_, static_cast<double>(rounds_), scale_);
  return arms_[last_];
}

void DUcb::observe(const RoundProbe& probe) {
  stats_[last_].add(probe.observation);
  ++rounds_;
}

// ------------------------------------------------------------- DUcbDouble

DUcbDouble::DUcbDouble(std::int64_t n, double alpha, double beta, double exploration_scale)
    : actions_(GrowingActionSet::create(n, alpha, beta)), scale_(exploration_scale) {}

VertexId DUcbDouble::select(std::int64_t t, Rng& rng) {
  if (d_ucb_double_step(actions_, t, rng) || !inner_) {
    inner_.emplace(actions_.action_set, scale_);
  }
  return inner_->select(t, rng);
}

void DUcbDouble::observe(const RoundProbe& probe) { inner_->observe(probe); }

// --------------------------------------------------------------- runner

std::vector<VertexId> run_policy(Policy& policy, std::int64_t horizon, const ProbeFn& probe,
                                 Rng& rng) {
  std::vector<VertexId> chosen;
  chosen.reserve(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const VertexId arm = policy.select(t, rng);
    policy.observe(probe(arm, policy.feedback(), rng));
    chosen.push_back(arm);
  }
  return chosen;
}

}  // namespace oim
