#pragma once

// One round of local feedback drawn from a single graph realization.

#include <cstdint>
#include <optional>
#include <string>

#include "oim/graph_models.hpp"

namespace oim {

/// What the learner observes about the chosen vertex's component.
struct FeedbackKind {
  enum class Kind { CensoredSize, ExceedIndicator, Degree };

  Kind kind = Kind::Degree;
  std::int64_t level = 0;  // censoring level K; unused for Degree

  static FeedbackKind censored(std::int64_t k);
  static FeedbackKind exceed(std::int64_t k);
  static FeedbackKind degree() { return FeedbackKind{Kind::Degree, 0}; }

  friend bool operator==(const FeedbackKind&, const FeedbackKind&) = default;
};

std::string to_string(const FeedbackKind& kind);

struct RoundProbe {
  /// min(|C|, K), [|C| > K] or the degree, depending on the feedback kind.
  double observation = 0.0;
  /// |C| > K was established (never set for Degree).
  bool truncated = false;
  std::optional<std::int64_t> true_component_size;
  /// Vertices revealed by the exploration.
  std::int64_t explored = 0;
};

inline constexpr std::int64_t kDefaultExhaustiveCap = 100000;

/// Explores the component of `i` in one fresh realization. With
/// `want_true_size` the same exploration is continued to exhaustion, so the
/// observation and the true size come from one graph. Refuses
/// (CapExceeded) exhaustion above `exhaustive_cap` vertices.
///
/// Builds sampling tables on every call; repeated probing should hold a
/// ComponentExplorer instead.
RoundProbe probe_round(const GraphModel& model, VertexId i, const FeedbackKind& feedback,
                       bool want_true_size, Rng& rng,
                       std::int64_t exhaustive_cap = kDefaultExhaustiveCap);

/// Degree of `i` in one fresh realization (Poisson-binomial over p_ij).
std::int64_t sample_degree(const GraphModel& model, VertexId i, Rng& rng);

/// Checks the coupling between observation and true size. Returns false if
/// a probe carrying a true size violates its feedback kind's invariants.
bool probe_is_consistent(const RoundProbe& probe, const FeedbackKind& feedback);

}  // namespace oim
