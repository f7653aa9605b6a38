#include "oim/feedback.hpp"

#include <algorithm>

#include "oim/explorer.hpp"

namespace oim {

FeedbackKind FeedbackKind::censored(std::int64_t k) {
  if (k < 1) throw InputError("censoring level must be >= 1");
  return FeedbackKind{Kind::CensoredSize, k};
}

FeedbackKind FeedbackKind::exceed(std::int64_t k) {
  if (k < 1) throw InputError("exceedance level must be >= 1");
  return FeedbackKind{Kind::ExceedIndicator, k};
}

std::string to_string(const FeedbackKind& kind) {
  switch (kind.kind) {
    case FeedbackKind::Kind::CensoredSize: return "censored(" + std::to_string(kind.level) + ")";
    case FeedbackKind::Kind::ExceedIndicator: return "exceed(" + std::to_string(kind.level) + ")";
    case FeedbackKind::Kind::Degree: return "degree";
  }
  return "unknown";
}

RoundProbe probe_round(const GraphModel& model, VertexId i, const FeedbackKind& feedback,
                       bool want_true_size, Rng& rng, std::int64_t exhaustive_cap) {
  EdgeSampler sampler(model);
  ComponentExplorer explorer(sampler, exhaustive_cap);
  return explorer.probe(i, feedback, want_true_size, rng);
}

std::int64_t sample_degree(const GraphModel& model, VertexId i, Rng& rng) {
  EdgeSampler sampler(model);
  ComponentExplorer explorer(sampler);
  return explorer.degree(i, rng);
}

bool probe_is_consistent(const RoundProbe& probe, const FeedbackKind& feedback) {
  using Kind = FeedbackKind::Kind;
  const double obs = probe.observation;
  switch (feedback.kind) {
    case Kind::CensoredSize:
      if (obs < 1.0 || obs > static_cast<double>(feedback.level)) return false;
      if (probe.truncated && obs != static_cast<double>(feedback.level)) return false;
      if (probe.true_component_size) {
        const auto size = *probe.true_component_size;
        if (obs != static_cast<double>(std::min(size, feedback.level))) return false;
        if (probe.truncated != (size > feedback.level)) return false;
      }
      return true;
    case Kind::ExceedIndicator:
      if (obs != 0.0 && obs != 1.0) return false;
      if (probe.true_component_size) {
        return obs == (*probe.true_component_size > feedback.level ? 1.0 : 0.0);
      }
      return true;
    case Kind::Degree:
      if (obs < 0.0 || obs != static_cast<double>(static_cast<std::int64_t>(obs))) return false;
      if (probe.true_component_size && obs + 1.0 > static_cast<double>(*probe.true_component_size)) {
        return false;
      }
      return !probe.truncated;
  }
  return false;
}

}  // namespace oim
