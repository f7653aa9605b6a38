#pragma once

// Lazy realization of G_t around a vertex.
//
// EdgeSampler holds immutable per-model sampling tables and can be shared by
// all threads. ComponentExplorer is a per-thread workspace that realizes one
// graph per round, only where the exploration looks.
//
// Within a round every pair {v, u} is decided at most once: a vertex only
// draws edges towards vertices not yet discovered, and an undiscovered
// vertex never re-draws edges towards discovered ones.
//
// Two sampling paths:
//  * class path (SBM, grid kernels, Chung–Lu with few distinct weights): the
//    neighbors of v inside class d are one Binomial(undiscovered_d, p_cd)
//    count followed by a uniform draw without replacement, implemented as a
//    lazily materialized Fisher–Yates shuffle of each class. O(degree + S)
//    expected work per explored vertex.
//  * pair path (Kronecker, many-weight Chung–Lu): one Bernoulli per
//    undiscovered vertex. O(n) per explored vertex.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "oim/feedback.hpp"
#include "oim/graph_models.hpp"
#include "oim/random.hpp"

namespace oim {

class EdgeSampler {
 public:
  /// Chung–Lu models use the class path up to this many distinct weights.
  static constexpr int kMaxWeightClasses = 512;

  explicit EdgeSampler(const GraphModel& model);

  const GraphModel& model() const { return *model_; }
  std::int64_t n() const { return n_; }
  bool uses_classes() const { return use_classes_; }

 private:
  friend class ComponentExplorer;

  std::shared_ptr<const GraphModel> model_;
  std::int64_t n_;
  bool use_classes_ = false;
  int classes_ = 0;
  std::vector<VertexId> order_;         // vertices grouped by class
  std::vector<std::int64_t> offset_;    // class start in order_, size classes_+1
  std::vector<int> class_of_;           // size n
  std::vector<std::int64_t> pos_in_class_;
  std::vector<double> prob_;            // classes_ x classes_
};

/// Pairs examined during one round, recorded for auditing.
using PairLog = std::vector<std::pair<VertexId, VertexId>>;

class ComponentExplorer {
 public:
  explicit ComponentExplorer(const EdgeSampler& sampler,
                             std::int64_t exhaustive_cap = kDefaultExhaustiveCap);

  /// One round: a fresh realization explored from `root`.
  RoundProbe probe(VertexId root, const FeedbackKind& feedback, bool want_true_size, Rng& rng,
                   PairLog* audit = nullptr);

  /// Exhaustive component size of `root` in a fresh realization.
  std::int64_t component_size(VertexId root, Rng& rng);

  /// Neighbors of `v` in a fresh realization, sorted ascending.
  std::vector<VertexId> neighbors(VertexId v, Rng& rng, PairLog* audit = nullptr);

  std::int64_t degree(VertexId v, Rng& rng);

  const EdgeSampler& sampler() const { return *sampler_; }

 private:
  void begin_round();
  void discover_root(VertexId v);
  bool discovered(VertexId v) const { return seen_[static_cast<std::size_t>(v)] == round_; }
  // Draws all edges from v to undiscovered vertices; appends new vertices to
  // queue_ and returns how many were found.
  std::int64_t expand(VertexId v, Rng& rng, PairLog* audit);
  std::int64_t expand_classes(VertexId v, Rng& rng, PairLog* audit);
  template <class Model>
  std::int64_t expand_pairs(const Model& m, VertexId v, Rng& rng, PairLog* audit);

  std::int64_t slot_value(std::int64_t slot) const {
    return perm_seen_[static_cast<std::size_t>(slot)] == round_
               ? perm_[static_cast<std::size_t>(slot)]
               : slot;
  }
  void set_slot(std::int64_t slot, std::int64_t value) {
    perm_seen_[static_cast<std::size_t>(slot)] = round_;
    perm_[static_cast<std::size_t>(slot)] = value;
  }

  const EdgeSampler* sampler_;
  std::int64_t exhaustive_cap_;
  std::uint32_t round_ = 0;
  std::vector<std::uint32_t> seen_;
  std::vector<VertexId> queue_;
  // Lazy Fisher–Yates state, indexed by global slot in sampler order_.
  std::vector<std::uint32_t> perm_seen_;
  std::vector<std::int64_t> perm_;
  std::vector<std::int64_t> front_;  // removed count per class
};

}  // namespace oim
