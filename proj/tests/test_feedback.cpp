#include <doctest.h>

#include <set>

#include "oim/explorer.hpp"
#include "oim/feedback.hpp"
#include "oim/stats.hpp"
#include "oim/validation.hpp"

using namespace oim;

namespace {

// Vertices 0 and 1 always joined, vertex 2 isolated.
GraphModel single_edge() { return GridKernelModel(3, Matrix{{0.0, 3.0, 0.0}, {3.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}); }

GraphModel er3() { return GridKernelModel(3, Matrix{{1.5}}); }

}  // namespace

TEST_CASE("probe: censored size on a deterministic edge") {
  Rng rng = make_stream(1, 0);
  const auto wide = probe_round(single_edge(), 0, FeedbackKind::censored(5), true, rng);
  CHECK(wide.observation == 2.0);
  CHECK_FALSE(wide.truncated);
  REQUIRE(wide.true_component_size);
  CHECK(*wide.true_component_size == 2);

  const auto tight = probe_round(single_edge(), 0, FeedbackKind::censored(1), false, rng);
  CHECK(tight.observation == 1.0);
  CHECK(tight.truncated);
  CHECK_FALSE(tight.true_component_size);

  const auto exact = probe_round(single_edge(), 0, FeedbackKind::censored(2), true, rng);
  CHECK(exact.observation == 2.0);
  CHECK_FALSE(exact.truncated);

  const auto alone = probe_round(single_edge(), 2, FeedbackKind::censored(5), true, rng);
  CHECK(alone.observation == 1.0);
  CHECK(*alone.true_component_size == 1);
}

TEST_CASE("probe: exceedance indicator and degree on a deterministic edge") {
  Rng rng = make_stream(2, 0);
  CHECK(probe_round(single_edge(), 1, FeedbackKind::exceed(1), false, rng).observation == 1.0);
  CHECK(probe_round(single_edge(), 1, FeedbackKind::exceed(2), false, rng).observation == 0.0);
  CHECK(probe_round(single_edge(), 2, FeedbackKind::exceed(1), false, rng).observation == 0.0);
  CHECK(probe_round(single_edge(), 0, FeedbackKind::degree(), false, rng).observation == 1.0);
}

TEST_CASE("feedback levels must be positive") {
  CHECK_THROWS_AS(FeedbackKind::censored(0), InputError);
  CHECK_THROWS_AS(FeedbackKind::exceed(-2), InputError);
  CHECK(to_string(FeedbackKind::censored(4)) == "censored(4)");
}

TEST_CASE("probe: ER(3, 1/2) true size averages 2.25") {
  // Edge subsets of K3 seen from vertex 0: sizes 1,1,2,2,3,3,3,3.
  const double oracle = (1 + 1 + 2 + 2 + 3 + 3 + 3 + 3) / 8.0;
  EdgeSampler sampler(er3());
  ComponentExplorer explorer(sampler);
  Rng rng = make_stream(3, 0);
  IntMoments m;
  for (int r = 0; r < 100000; ++r) {
    const auto p = explorer.probe(0, FeedbackKind::censored(1), true, rng);
    m.add(*p.true_component_size);
  }
  CHECK(std::abs(m.mean() - oracle) < 3.0 * m.std_error());
}

TEST_CASE("probe: observation is coupled to the true size of the same graph") {
  const std::vector<GraphModel> models = {
      SbmModel({40, 60}, Matrix{{3.0, 0.4}, {0.4, 0.9}}, true),
      ChungLuModel({0.5, 0.5, 1.0, 2.0, 3.0, 0.7, 1.2, 2.2, 1.1, 0.9, 0.4, 1.5}),
      KroneckerModel(6, 0.9, 0.3, 0.5),
  };
  const std::vector<FeedbackKind> kinds = {FeedbackKind::censored(1), FeedbackKind::censored(3),
                                           FeedbackKind::censored(12), FeedbackKind::exceed(1),
                                           FeedbackKind::exceed(5), FeedbackKind::degree()};
  Rng rng = make_stream(4, 0);
  for (const auto& model : models) {
    EdgeSampler sampler(model);
    ComponentExplorer explorer(sampler);
    for (const auto& kind : kinds) {
      bool all_ok = true;
      for (int r = 0; r < 2000; ++r) {
        const auto v = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(vertex_count(model)));
        const auto p = explorer.probe(v, kind, true, rng);
        all_ok = all_ok && p.true_component_size.has_value() && probe_is_consistent(p, kind);
        all_ok = all_ok && probe_is_consistent(explorer.probe(v, kind, false, rng), kind);
      }
      CAPTURE(model_kind(model));
      CAPTURE(to_string(kind));
      CHECK(all_ok);
    }
  }
}

TEST_CASE("probe_is_consistent rejects broken couplings") {
  RoundProbe p;
  p.observation = 3.0;
  p.true_component_size = 5;
  p.truncated = true;
  CHECK(probe_is_consistent(p, FeedbackKind::censored(3)));
  CHECK_FALSE(probe_is_consistent(p, FeedbackKind::censored(4)));
  p.truncated = false;
  CHECK_FALSE(probe_is_consistent(p, FeedbackKind::censored(3)));
  RoundProbe e;
  e.observation = 1.0;
  e.true_component_size = 2;
  CHECK(probe_is_consistent(e, FeedbackKind::exceed(1)));
  CHECK_FALSE(probe_is_consistent(e, FeedbackKind::exceed(2)));
  e.observation = 0.5;
  CHECK_FALSE(probe_is_consistent(e, FeedbackKind::exceed(2)));
}

TEST_CASE("probe: each pair is drawn at most once per round") {
  const std::vector<GraphModel> models = {
      SbmModel({30, 30}, Matrix{{4.0, 1.0}, {1.0, 3.0}}, true),
      KroneckerModel(6, 0.9, 0.5, 0.6),
      ChungLuModel(power_law_weights(80, 2.5, 2.5)),
  };
  Rng rng = make_stream(5, 0);
  for (const auto& model : models) {
    EdgeSampler sampler(model);
    ComponentExplorer explorer(sampler);
    bool unique = true;
    std::int64_t pairs = 0;
    for (int r = 0; r < 300; ++r) {
      PairLog log;
      explorer.probe(static_cast<VertexId>(r % vertex_count(model)), FeedbackKind::censored(1), true, rng, &log);
      std::set<std::pair<VertexId, VertexId>> seen;
      for (auto [a, b] : log) {
        unique = unique && a != b && seen.insert({std::min(a, b), std::max(a, b)}).second;
      }
      pairs += static_cast<std::int64_t>(log.size());
    }
    CAPTURE(model_kind(model));
    CHECK(unique);
    CHECK(pairs > 0);
  }
}

TEST_CASE("probe: exhaustion refused above the cap") {
  Rng rng = make_stream(6, 0);
  const GraphModel m = SbmModel({50}, Matrix{{1.0}});
  CHECK_THROWS_AS(probe_round(m, 0, FeedbackKind::censored(2), true, rng, 10), CapExceeded);
  CHECK_NOTHROW(probe_round(m, 0, FeedbackKind::censored(2), false, rng, 10));
}

TEST_CASE("sample_degree: degenerate models") {
  Rng rng = make_stream(7, 0);
  for (int r = 0; r < 50; ++r) {
    CHECK(sample_degree(GridKernelModel(4, Matrix{{0.0}}), 1, rng) == 0);
    CHECK(sample_degree(GridKernelModel(2, Matrix{{2.0}}), 0, rng) == 1);
  }
}

TEST_CASE("sample_degree: Poisson-binomial mean") {
  const GraphModel m = SbmModel({2, 2}, Matrix{{2.0, 1.0}, {1.0, 2.0}}, true);
  EdgeSampler sampler(m);
  ComponentExplorer explorer(sampler);
  Rng rng = make_stream(8, 0);
  IntMoments d;
  for (int r = 0; r < 100000; ++r) d.add(explorer.degree(0, rng));
  CHECK(std::abs(d.mean() - 1.0) < 3.0 * d.std_error());
}

TEST_CASE("degree MGF is dominated by the Poisson MGF") {
  for (const auto& c : check_poisson_dominance(100000, 9)) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("subcritical component tail is exponential") {
  const auto checks = check_subcritical_tail(2000, 0.5, 100000, 10);
  REQUIRE(checks.size() == 2);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CAPTURE(c.measured);
    CHECK(c.passed);
  }
}
