#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "oim/graph_models.hpp"
#include "oim/stats.hpp"
#include "oim/validation.hpp"

using namespace oim;

namespace {

GraphModel two_by_two() { return SbmModel({2, 2}, Matrix{{2.0, 1.0}, {1.0, 2.0}}, true); }

// Sum of p_ij over j != i, the definition expected_degree must reproduce.
double degree_by_sum(const GraphModel& m, VertexId i) {
  double s = 0.0;
  for (VertexId j = 0; j < vertex_count(m); ++j) s += edge_prob(m, i, j);
  return s;
}

}  // namespace

TEST_CASE("edge_prob: same SBM block is K_ll / n") {
  CHECK(edge_prob(two_by_two(), 0, 1) == 0.5);
  CHECK(edge_prob(two_by_two(), 0, 2) == 0.25);
}

TEST_CASE("edge_prob: diagonal is zero for every model kind") {
  const std::vector<GraphModel> models = {
      two_by_two(), ChungLuModel({1.0, 1.5, 0.5}), KroneckerModel(3, 0.9, 0.5, 0.6),
      GridKernelModel(5, Matrix{{10.0}})};
  for (const auto& m : models) {
    for (VertexId i = 0; i < vertex_count(m); ++i) CHECK(edge_prob(m, i, i) == 0.0);
  }
}

TEST_CASE("edge_prob: Kronecker strings (1,1) and (1,0) give zeta * beta") {
  const KroneckerModel k(2, 0.9, 0.5, 0.6);
  CHECK(edge_prob(k, 3, 2) == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(edge_prob(k, 2, 3) == edge_prob(k, 3, 2));
}

TEST_CASE("edge_prob: symmetric, in [0, 1], ids validated") {
  const GraphModel m = GridKernelModel(7, Matrix{{1.0, 9.0}, {9.0, 0.5}});
  for (VertexId i = 0; i < 7; ++i) {
    for (VertexId j = 0; j < 7; ++j) {
      const double p = edge_prob(m, i, j);
      CHECK(p == edge_prob(m, j, i));
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  CHECK_THROWS_AS(edge_prob(m, -1, 0), InputError);
  CHECK_THROWS_AS(edge_prob(m, 0, 7), InputError);
  CHECK_THROWS_AS(expected_degree(m, 7), InputError);
}

TEST_CASE("expected_degree: SBM example sums to 1") {
  const GraphModel m = two_by_two();
  CHECK(degree_by_sum(m, 0) == doctest::Approx(1.0));
  CHECK(expected_degree(m, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expected_degree(m, 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expected_degree: constant Chung-Lu weights") {
  const double c = 1.5;
  const std::int64_t n = 10;
  const GraphModel m = ChungLuModel(std::vector<double>(n, c));
  CHECK(expected_degree(m, 4) == doctest::Approx(c * c * (n - 1) / n).epsilon(1e-14));
}

TEST_CASE("expected_degree: Kronecker all-ones string excludes the self term") {
  const KroneckerModel k(2, 0.9, 0.5, 0.6);
  CHECK(expected_degree(k, 3) == doctest::Approx(1.4 * 1.4 - 0.9 * 0.9).epsilon(1e-14));
  CHECK(expected_degree(k, 0) == doctest::Approx(1.1 * 1.1 - 0.6 * 0.6).epsilon(1e-14));
}

TEST_CASE("expected_degree matches the sum of edge probabilities") {
  const std::vector<GraphModel> models = {
      SbmModel({30, 50, 20}, Matrix{{3.0, 0.5, 0.2}, {0.5, 1.0, 0.7}, {0.2, 0.7, 150.0}}),
      ChungLuModel(power_law_weights(200, 2.5, 2.0)),
      KroneckerModel(7, 0.9, 0.2, 0.4),
      GridKernelModel(113, Matrix{{1.0, 2.0, 300.0}, {2.0, 0.0, 1.0}, {300.0, 1.0, 4.0}}),
  };
  for (const auto& m : models) {
    CAPTURE(model_kind(m));
    for (VertexId i = 0; i < vertex_count(m); ++i) {
      CHECK(std::abs(expected_degree(m, i) - degree_by_sum(m, i)) < 1e-12);
    }
  }
}

TEST_CASE("criticality: reference values") {
  const auto er = criticality(SbmModel({100}, Matrix{{2.0}}));
  CHECK(er.operator_norm == doctest::Approx(2.0));
  CHECK(er.regime == Regime::Supercritical);

  const auto cl = criticality(ChungLuModel(std::vector<double>(50, 1.0)));
  CHECK(cl.operator_norm == doctest::Approx(1.0));
  CHECK(cl.regime == Regime::NearCritical);

  const auto kr = criticality(KroneckerModel(4, 0.9, 0.5, 0.6));
  CHECK(kr.operator_norm == doctest::Approx(1.54));
  CHECK(kr.regime == Regime::Supercritical);

  const auto sub = criticality(SbmModel({100}, Matrix{{0.5}}));
  CHECK(sub.regime == Regime::Subcritical);
  CHECK_THROWS_AS(criticality(SbmModel({10}, Matrix{{0.5}}), 0.0), InputError);
}

TEST_CASE("criticality: regime band edges") {
  const auto at = [](double k, double tol) { return criticality(SbmModel({10}, Matrix{{k}}), tol).regime; };
  CHECK(at(0.94, 0.05) == Regime::Subcritical);
  CHECK(at(0.96, 0.05) == Regime::NearCritical);
  CHECK(at(1.04, 0.05) == Regime::NearCritical);
  CHECK(at(1.06, 0.05) == Regime::Supercritical);
}

TEST_CASE("criticality: SBM uses block proportions") {
  // M = K diag(1/4, 3/4) for K = [[2,1],[1,2]].
  const auto c = criticality(SbmModel({25, 75}, Matrix{{2.0, 1.0}, {1.0, 2.0}}));
  const double a = 0.5, b = 0.75, d = 0.25, e = 1.5;  // rows of M
  const double lambda = 0.5 * (a + e + std::sqrt((a - e) * (a - e) + 4 * b * d));
  CHECK(c.operator_norm == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("validation: structural monotonicity properties") {
  for (const auto& c : check_structural_monotonicity()) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}

TEST_CASE("constructors reject malformed models") {
  CHECK_THROWS_AS(SbmModel({2, 2}, Matrix{{1.0, 0.5}, {0.4, 1.0}}), InputError);
  CHECK_THROWS_AS(SbmModel({2, 2}, Matrix{{1.0, 0.0}, {0.0, 1.0}}), InputError);
  CHECK_THROWS_AS(SbmModel({2, 0}, Matrix{{1.0, 0.5}, {0.5, 1.0}}), InputError);
  CHECK_THROWS_AS(SbmModel({2}, Matrix{{1.0, 0.5}, {0.5, 1.0}}), InputError);
  CHECK_THROWS_AS(SbmModel({2, 2, 2}, Matrix{{1, 0.5, 0.4}, {0.5, 1, 0.5}, {0.4, 0.5, 1}}, true), InputError);
  CHECK_THROWS_AS(ChungLuModel({1.0, -1.0}), InputError);
  CHECK_THROWS_AS(ChungLuModel({2.0, 2.0}), InputError);
  CHECK_THROWS_AS(KroneckerModel(0, 0.9, 0.5, 0.6), InputError);
  CHECK_THROWS_AS(KroneckerModel(3, 1.2, 0.5, 0.6), InputError);
  CHECK_THROWS_AS(KroneckerModel(3, 0.5, 0.6, 0.9, true), InputError);
  CHECK_THROWS_AS(GridKernelModel(3, Matrix{{1.0, -1.0}, {-1.0, 1.0}}), InputError);
  CHECK_THROWS_AS(power_law_weights(10, 2.0, 1.0), InputError);
}

TEST_CASE("sample_neighbors: degenerate models") {
  Rng rng = make_stream(1, 0);
  const GraphModel empty = GridKernelModel(6, Matrix{{0.0}});
  const GraphModel full = GridKernelModel(6, Matrix{{6.0}});
  for (int r = 0; r < 20; ++r) {
    CHECK(sample_neighbors(empty, 2, rng).empty());
    CHECK(sample_neighbors(full, 2, rng) == std::vector<VertexId>{0, 1, 3, 4, 5});
  }
}

TEST_CASE("sample_neighbors: binomial mean on a large ER-like SBM") {
  const std::int64_t n = 10000;
  const GraphModel m = SbmModel({n}, Matrix{{0.5}});
  Rng rng = make_stream(2, 0);
  IntMoments size;
  for (int r = 0; r < 10000; ++r) {
    const auto nb = sample_neighbors(m, 17, rng);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    size.add(static_cast<std::int64_t>(nb.size()));
  }
  const double expected = 0.5 * (n - 1) / n;
  CHECK(std::abs(size.mean() - expected) < 3.0 * size.std_error());
}

TEST_CASE("sample_full_graph: degenerate and capped models") {
  Rng rng = make_stream(3, 0);
  const auto pair = sample_full_graph(GridKernelModel(2, Matrix{{2.0}}), rng);
  CHECK(pair == AdjacencyList{{1}, {0}});
  const auto none = sample_full_graph(GridKernelModel(3, Matrix{{0.0}}), rng);
  CHECK(none == AdjacencyList{{}, {}, {}});
  CHECK_THROWS_AS(sample_full_graph(SbmModel({200}, Matrix{{1.0}}), rng, 100), CapExceeded);
}

TEST_CASE("sample_full_graph: ER(3, 1/2) is uniform over the 8 edge sets") {
  const GraphModel m = GridKernelModel(3, Matrix{{1.5}});
  Rng rng = make_stream(4, 0);
  const int draws = 8000;
  std::map<int, int> freq;
  for (int r = 0; r < draws; ++r) {
    const auto g = sample_full_graph(m, rng);
    for (VertexId v = 0; v < 3; ++v) {
      for (VertexId u : g[static_cast<std::size_t>(v)]) {
        CHECK(u != v);
        const auto& back = g[static_cast<std::size_t>(u)];
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
    const auto has = [&](VertexId a, VertexId b) {
      const auto& nb = g[static_cast<std::size_t>(a)];
      return std::find(nb.begin(), nb.end(), b) != nb.end();
    };
    ++freq[has(0, 1) * 1 + has(0, 2) * 2 + has(1, 2) * 4];
  }
  REQUIRE(freq.size() == 8);
  const double sigma = std::sqrt(0.125 * 0.875 / draws);
  for (const auto& [mask, count] : freq) {
    CAPTURE(mask);
    CHECK(std::abs(static_cast<double>(count) / draws - 0.125) < 3.0 * sigma);
  }
}

TEST_CASE("lazy neighbor sampling agrees with full graphs") {
  for (const auto& c : check_lazy_eager(100000, 5)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}

TEST_CASE("symmetry classes partition vertices") {
  const auto sbm = symmetry_classes(SbmModel({3, 2}, Matrix{{1.0, 0.5}, {0.5, 1.0}}));
  CHECK(sbm.class_of == std::vector<int>{0, 0, 0, 1, 1});
  CHECK(sbm.representative == std::vector<VertexId>{0, 3});

  const auto cl = symmetry_classes(ChungLuModel({1.0, 2.0, 1.0, 2.0, 0.5}));
  CHECK(cl.count() == 3);
  CHECK(cl.class_of[0] == cl.class_of[2]);
  CHECK(cl.class_of[1] == cl.class_of[3]);

  const auto kr = symmetry_classes(KroneckerModel(4, 0.9, 0.5, 0.6));
  CHECK(kr.count() == 5);
  std::int64_t total = 0;
  for (auto s : kr.size) total += s;
  CHECK(total == 16);
  CHECK(kr.class_of[0b0110] == kr.class_of[0b1001]);
}

TEST_CASE("power-law weights respect the sparsity cap") {
  const auto w = power_law_weights(500, 2.5, 3.0);
  REQUIRE(w.size() == 500);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum / 500 == doctest::Approx(3.0).epsilon(0.05));
  const double mx = *std::max_element(w.begin(), w.end());
  CHECK(mx * mx / 500 < 1.0);
  CHECK_NOTHROW(ChungLuModel{w});
}
