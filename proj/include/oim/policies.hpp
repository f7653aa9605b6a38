#pragma once

// The five learners, each a state machine over an abstract probe: select an
// arm, say which feedback to observe, consume the probe.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "oim/bandit.hpp"
#include "oim/feedback.hpp"

namespace oim {

class Policy {
 public:
  virtual ~Policy() = default;

  /// Arm to play in global round t (1-based). `rng` is only consumed by
  /// learners that sample new actions on the fly.
  virtual VertexId select(std::int64_t t, Rng& rng) = 0;
  /// Feedback to observe for the arm just selected.
  virtual FeedbackKind feedback() const = 0;
  virtual void observe(const RoundProbe& probe) = 0;

  virtual std::string_view name() const = 0;
  virtual const std::vector<VertexId>& arms() const = 0;
};

/// Censored-size UCB with a fixed censoring level, for subcritical graphs.
class LocalUcbSubcritical final : public Policy {
 public:
  LocalUcbSubcritical(std::vector<VertexId> arms, double censoring);

  VertexId select(std::int64_t t, Rng& rng) override;
  FeedbackKind feedback() const override;
  void observe(const RoundProbe& probe) override;
  std::string_view name() const override { return "local_ucb_sub"; }
  const std::vector<VertexId>& arms() const override { return arms_; }
  std::span<const ArmStats> stats() const { return stats_; }

 private:
  std::vector<VertexId> arms_;
  std::vector<ArmStats> stats_;
  double censoring_;
  std::int64_t rounds_ = 0;
  std::size_t last_ = 0;
};

/// Censored-size UCB with episode-wise doubling of the censoring level.
class UcbDouble final : public Policy {
 public:
  UcbDouble(std::vector<VertexId> arms, double horizon);

  VertexId select(std::int64_t t, Rng& rng) override;
  FeedbackKind feedback() const override;
  void observe(const RoundProbe& probe) override;
  std::string_view name() const override { return "ucb_double"; }
  const std::vector<VertexId>& arms() const override { return arms_; }
  const EpisodeState& episode() const { return episode_; }

 private:
  std::vector<VertexId> arms_;
  std::vector<ArmStats> stats_;
  EpisodeState episode_;
  double horizon_;
  std::size_t last_ = 0;
};

/// Exceedance-indicator UCB for supercritical graphs.
class LocalUcbSupercritical final : public Policy {
 public:
  LocalUcbSupercritical(std::vector<VertexId> arms, std::int64_t level);

  VertexId select(std::int64_t t, Rng& rng) override;
  FeedbackKind feedback() const override;
  void observe(const RoundProbe& probe) override;
  std::string_view name() const override { return "local_ucb_sup"; }
  const std::vector<VertexId>& arms() const override { return arms_; }

 private:
  std::vector<VertexId> arms_;
  std::vector<ArmStats> stats_;
  std::int64_t level_;
  std::int64_t rounds_ = 0;
  std::size_t last_ = 0;
};

/// Degree-feedback kl-UCB on a fixed action set.
class DUcb final : public Policy {
 public:
  explicit DUcb(std::vector<VertexId> arms, double exploration_scale = 3.0);

  VertexId select(std::int64_t t, Rng& rng) override;
  FeedbackKind feedback() const override { return FeedbackKind::degree(); }
  void observe(const RoundProbe& probe) override;
  std::string_view name() const override { return "d_ucb"; }
  const std::vector<VertexId>& arms() const override { return arms_; }
  std::span<const ArmStats> stats() const { return stats_; }

 private:
  std::vector<VertexId> arms_;
  std::vector<ArmStats> stats_;
  double scale_;
  std::int64_t rounds_ = 0;
  std::size_t last_ = 0;
};

/// kl-UCB restarted on a growing action set at rounds 1, beta, beta^2, ...
class DUcbDouble final : public Policy {
 public:
  DUcbDouble(std::int64_t n, double alpha, double beta, double exploration_scale = 3.0);

  VertexId select(std::int64_t t, Rng& rng) override;
  FeedbackKind feedback() const override { return FeedbackKind::degree(); }
  void observe(const RoundProbe& probe) override;
  std::string_view name() const override { return "d_ucb_double"; }
  const std::vector<VertexId>& arms() const override { return actions_.action_set; }
  const GrowingActionSet& action_set() const { return actions_; }

 private:
  GrowingActionSet actions_;
  double scale_;
  std::optional<DUcb> inner_;
};

/// Probe callback: one round of feedback for `arm`, from a fresh graph.
using ProbeFn = std::function<RoundProbe(VertexId arm, const FeedbackKind& feedback, Rng& rng)>;

/// Plays `horizon` rounds and returns the chosen arm of each round.
std::vector<VertexId> run_policy(Policy& policy, std::int64_t horizon, const ProbeFn& probe,
                                 Rng& rng);

}  // namespace oim
