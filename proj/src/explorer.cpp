#include "oim/explorer.hpp"

#include <algorithm>
#include <sstream>

namespace oim {

EdgeSampler::EdgeSampler(const GraphModel& model)
    : model_(std::make_shared<const GraphModel>(model)), n_(vertex_count(model)) {
  const bool class_model = std::holds_alternative<SbmModel>(model) ||
                           std::holds_alternative<GridKernelModel>(model) ||
                           std::holds_alternative<ChungLuModel>(model);
  if (!class_model) return;
  SymmetryClasses sym = symmetry_classes(model);
  if (std::holds_alternative<ChungLuModel>(model) && sym.count() > kMaxWeightClasses) return;

  use_classes_ = true;
  classes_ = sym.count();
  offset_.assign(static_cast<std::size_t>(classes_) + 1, 0);
  for (int c = 0; c < classes_; ++c) offset_[c + 1] = offset_[c] + sym.size[c];
  order_.resize(static_cast<std::size_t>(n_));
  pos_in_class_.resize(static_cast<std::size_t>(n_));
  std::vector<std::int64_t> fill(static_cast<std::size_t>(classes_), 0);
  for (VertexId v = 0; v < n_; ++v) {
    const int c = sym.class_of[static_cast<std::size_t>(v)];
    pos_in_class_[static_cast<std::size_t>(v)] = fill[c];
    order_[static_cast<std::size_t>(offset_[c] + fill[c]++)] = v;
  }
  class_of_ = std::move(sym.class_of);

  // p between two distinct members of classes c and d.
  prob_.assign(static_cast<std::size_t>(classes_) * classes_, 0.0);
  for (int c = 0; c < classes_; ++c) {
    for (int d = 0; d < classes_; ++d) {
      const VertexId a = order_[static_cast<std::size_t>(offset_[c])];
      VertexId b = order_[static_cast<std::size_t>(offset_[d])];
      if (c == d) {
        if (sym.size[c] < 2) continue;
        b = order_[static_cast<std::size_t>(offset_[d] + 1)];
      }
      prob_[static_cast<std::size_t>(c) * classes_ + d] =
          std::visit([&](const auto& m) { return m.prob(a, b); }, model);
    }
  }
}

ComponentExplorer::ComponentExplorer(const EdgeSampler& sampler, std::int64_t exhaustive_cap)
    : sampler_(&sampler),
      exhaustive_cap_(exhaustive_cap),
      seen_(static_cast<std::size_t>(sampler.n()), 0) {
  if (sampler.use_classes_) {
    perm_seen_.assign(static_cast<std::size_t>(sampler.n()), 0);
    perm_.assign(static_cast<std::size_t>(sampler.n()), 0);
    front_.assign(static_cast<std::size_t>(sampler.classes_), 0);
  }
  queue_.reserve(64);
}

void ComponentExplorer::begin_round() {
  if (++round_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    std::fill(perm_seen_.begin(), perm_seen_.end(), 0);
    round_ = 1;
  }
  queue_.clear();
  std::fill(front_.begin(), front_.end(), 0);
}

void ComponentExplorer::discover_root(VertexId v) {
  if (v < 0 || v >= sampler_->n()) {
    std::ostringstream msg;
    msg << "vertex id " << v << " out of range [0, " << sampler_->n() << ")";
    throw InputError(msg.str());
  }
  seen_[static_cast<std::size_t>(v)] = round_;
  queue_.push_back(v);
  if (sampler_->use_classes_) {
    const int c = sampler_->class_of_[static_cast<std::size_t>(v)];
    const std::int64_t front_slot = sampler_->offset_[c];
    const std::int64_t root_slot = front_slot + sampler_->pos_in_class_[static_cast<std::size_t>(v)];
    const std::int64_t displaced = slot_value(front_slot);
    set_slot(front_slot, slot_value(root_slot));
    set_slot(root_slot, displaced);
    front_[c] = 1;
  }
}

std::int64_t ComponentExplorer::expand(VertexId v, Rng& rng, PairLog* audit) {
  if (sampler_->use_classes_) return expand_classes(v, rng, audit);
  return std::visit([&](const auto& m) { return expand_pairs(m, v, rng, audit); },
                    sampler_->model());
}

std::int64_t ComponentExplorer::expand_classes(VertexId v, Rng& rng, PairLog* audit) {
  const EdgeSampler& s = *sampler_;
  const int c = s.class_of_[static_cast<std::size_t>(v)];
  const double* row = s.prob_.data() + static_cast<std::size_t>(c) * s.classes_;
  std::int64_t found = 0;
  for (int d = 0; d < s.classes_; ++d) {
    const std::int64_t begin = s.offset_[d];
    const std::int64_t size = s.offset_[d + 1] - begin;
    const std::int64_t avail = size - front_[d];
    if (audit != nullptr) {
      for (std::int64_t slot = begin + front_[d]; slot < begin + size; ++slot) {
        const VertexId u = s.order_[static_cast<std::size_t>(slot_value(slot))];
        audit->emplace_back(std::min(v, u), std::max(v, u));
      }
    }
    const double p = row[d];
    if (avail <= 0 || p <= 0.0) continue;
    std::int64_t k = avail;
    if (p < 1.0) k = std::binomial_distribution<std::int64_t>(avail, p)(rng);
    for (std::int64_t t = 0; t < k; ++t) {
      const std::int64_t front_slot = begin + front_[d];
      const std::int64_t remaining = size - front_[d];
      const std::int64_t pick =
          front_slot + std::uniform_int_distribution<std::int64_t>(0, remaining - 1)(rng);
      const std::int64_t value = slot_value(pick);
      set_slot(pick, slot_value(front_slot));
      set_slot(front_slot, value);
      ++front_[d];
      const VertexId u = s.order_[static_cast<std::size_t>(value)];
      seen_[static_cast<std::size_t>(u)] = round_;
      queue_.push_back(u);
    }
    found += k;
  }
  return found;
}

template <class Model>
std::int64_t ComponentExplorer::expand_pairs(const Model& m, VertexId v, Rng& rng, PairLog* audit) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::int64_t n = sampler_->n();
  std::int64_t found = 0;
  for (VertexId u = 0; u < n; ++u) {
    if (discovered(u)) continue;
    if (audit != nullptr) audit->emplace_back(std::min(v, u), std::max(v, u));
    const double p = m.prob(v, u);
    if (p > 0.0 && unif(rng) < p) {
      seen_[static_cast<std::size_t>(u)] = round_;
      queue_.push_back(u);
      ++found;
    }
  }
  return found;
}

RoundProbe ComponentExplorer::probe(VertexId root, const FeedbackKind& feedback,
                                    bool want_true_size, Rng& rng, PairLog* audit) {
  if (want_true_size && sampler_->n() > exhaustive_cap_) {
    std::ostringstream msg;
    msg << "exhaustive exploration refused for n = " << sampler_->n() << " (cap "
        << exhaustive_cap_ << ")";
    throw CapExceeded(msg.str());
  }
  using Kind = FeedbackKind::Kind;
  begin_round();
  discover_root(root);
  std::int64_t count = 1;
  std::int64_t degree = 0;
  std::size_t head = 0;
  while (head < queue_.size()) {
    const VertexId v = queue_[head++];
    const std::int64_t added = expand(v, rng, audit);
    count += added;
    if (head == 1) degree = added;
    if (!want_true_size) {
      if (feedback.kind == Kind::Degree) break;
      if (count > feedback.level) break;
    }
  }

  RoundProbe out;
  out.explored = count;
  switch (feedback.kind) {
    case Kind::CensoredSize:
      out.truncated = count > feedback.level;
      out.observation = static_cast<double>(std::min(count, feedback.level));
      break;
    case Kind::ExceedIndicator:
      out.truncated = count > feedback.level;
      out.observation = out.truncated ? 1.0 : 0.0;
      break;
    case Kind::Degree:
      out.observation = static_cast<double>(degree);
      break;
  }
  if (want_true_size) out.true_component_size = count;
  return out;
}

std::int64_t ComponentExplorer::component_size(VertexId root, Rng& rng) {
  return *probe(root, FeedbackKind::degree(), true, rng).true_component_size;
}

std::vector<VertexId> ComponentExplorer::neighbors(VertexId v, Rng& rng, PairLog* audit) {
  begin_round();
  discover_root(v);
  expand(v, rng, audit);
  std::vector<VertexId> out(queue_.begin() + 1, queue_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t ComponentExplorer::degree(VertexId v, Rng& rng) {
  begin_round();
  discover_root(v);
  return expand(v, rng, nullptr);
}

std::vector<VertexId> sample_neighbors(const GraphModel& model, VertexId i, Rng& rng) {
  EdgeSampler sampler(model);
  ComponentExplorer explorer(sampler);
  return explorer.neighbors(i, rng);
}

}  // namespace oim
