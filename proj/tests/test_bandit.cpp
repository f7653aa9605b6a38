#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oim/bandit.hpp"
#include "oim/validation.hpp"

using namespace oim;

namespace {

ArmStats arm(double mean, std::int64_t pulls) {
  ArmStats s;
  s.pulls = pulls;
  s.sum = mean * static_cast<double>(pulls);
  s.mean = mean;
  return s;
}

// Root of d(mu, U) = b above mu by Newton's method from the right; d is
// convex and increasing there, so the iterates decrease monotonically.
double newton_upper(double mu, double b) {
  double u = mu + b + std::sqrt(2.0 * mu * b) + 1.0;
  for (int i = 0; i < 100; ++i) {
    const double f = u - mu + mu * std::log(mu / u) - b;
    const double df = 1.0 - mu / u;
    u -= f / df;
  }
  return u;
}

constexpr double e = std::numbers::e;

}  // namespace

TEST_CASE("v0_size examples") {
  CHECK(v0_size(100000, 0.5, 1000) == 10);
  CHECK(v0_size(100000, 1.0 - std::exp(-1.0), std::exp(2.0)) == 2);
  CHECK(v0_size(5, 0.5, 1e6) == 5);
}

TEST_CASE("subsample_v0: uniform sample without replacement") {
  Rng rng = make_stream(1, 0);
  std::vector<std::int64_t> hits(20, 0);
  for (int r = 0; r < 4000; ++r) {
    const auto v0 = subsample_v0(20, 0.5, 1000, rng);
    REQUIRE(v0.size() == 10);
    CHECK(std::is_sorted(v0.begin(), v0.end()));
    CHECK(std::adjacent_find(v0.begin(), v0.end()) == v0.end());
    for (auto v : v0) ++hits[static_cast<std::size_t>(v)];
  }
  // Each vertex is included with probability 1/2.
  const double sigma = std::sqrt(4000 * 0.25);
  for (auto h : hits) CHECK(std::abs(h - 2000.0) < 4.0 * sigma);
  CHECK_THROWS_AS(subsample_v0(20, 0.0, 1000, rng), InputError);
  CHECK_THROWS_AS(subsample_v0(20, 1.0, 1000, rng), InputError);
  CHECK_THROWS_AS(subsample_v0(20, 0.5, 1, rng), InputError);
}

TEST_CASE("local_ucb_sub_select examples") {
  const std::vector<ArmStats> tie = {arm(2, 1), arm(2, 1)};
  CHECK(local_ucb_sub_select(tie, 3.0, e) == 0);

  const std::vector<ArmStats> ab = {arm(5, 100), arm(1, 1)};
  const double index_a = 5 + 10 * std::sqrt(std::log(100.0) / 100);
  const double index_b = 1 + 10 * std::sqrt(std::log(100.0));
  CHECK(index_a == doctest::Approx(7.15).epsilon(1e-3));
  CHECK(index_b == doctest::Approx(22.46).epsilon(1e-3));
  CHECK(local_ucb_sub_select(ab, 10.0, 100) == 1);

  const std::vector<ArmStats> greedy = {arm(1, 1), arm(4, 1000), arm(3, 1)};
  CHECK(local_ucb_sub_select(greedy, 0.0, 1e6) == 1);

  const std::vector<ArmStats> fresh = {arm(1, 1), ArmStats{}};
  CHECK_THROWS_AS(local_ucb_sub_select(fresh, 1.0, 10), ContractViolation);
  CHECK_THROWS_AS(local_ucb_sub_select(std::vector<ArmStats>{}, 1.0, 10), ContractViolation);
}

TEST_CASE("local_ucb_sup_select examples") {
  const std::vector<ArmStats> zeros = {arm(0, 7), arm(0, 7), arm(0, 7)};
  CHECK(local_ucb_sup_select(zeros, 50) == 0);

  const std::vector<ArmStats> a = {arm(1, 10), arm(0, 10)};
  CHECK(std::sqrt(std::log(10.0) / 10) == doctest::Approx(0.48).epsilon(0.01));
  CHECK(local_ucb_sup_select(a, 10) == 0);

  const std::vector<ArmStats> b = {arm(0.5, 100), arm(0, 1)};
  CHECK(0.5 + std::sqrt(std::log(100.0) / 100) == doctest::Approx(0.715).epsilon(1e-3));
  CHECK(std::sqrt(std::log(100.0)) == doctest::Approx(2.146).epsilon(1e-3));
  CHECK(local_ucb_sup_select(b, 100) == 1);
}

TEST_CASE("selectors: argmax invariant under a common shift") {
  Rng rng = make_stream(2, 0);
  std::uniform_real_distribution<double> mean(0.0, 5.0);
  std::uniform_int_distribution<int> pulls(1, 50);
  for (int r = 0; r < 500; ++r) {
    std::vector<ArmStats> arms, shifted;
    for (int a = 0; a < 6; ++a) {
      const double m = mean(rng);
      const int n = pulls(rng);
      arms.push_back(arm(m, n));
      shifted.push_back(arm(m + 2.5, n));
    }
    const double t = 10.0 + r;
    CHECK(local_ucb_sub_select(arms, 2.0, t) == local_ucb_sub_select(shifted, 2.0, t));
    CHECK(local_ucb_sup_select(arms, t) == local_ucb_sup_select(shifted, t));
  }
}

TEST_CASE("poisson_kl examples") {
  CHECK(poisson_kl(1.0, e) == doctest::Approx(e - 2.0).epsilon(1e-15));
  CHECK(poisson_kl(3.7, 3.7) == 0.0);
  CHECK(poisson_kl(0.0, 3.0) == 3.0);
  CHECK(poisson_kl(2.0, 1.0) > 0.0);
  CHECK_THROWS_AS(poisson_kl(1.0, 0.0), InputError);
  CHECK_THROWS_AS(poisson_kl(-1.0, 1.0), InputError);
}

TEST_CASE("kl_ucb_upper examples") {
  CHECK(std::abs(kl_ucb_upper(1.0, e - 2.0) - e) < 1e-9);
  CHECK(kl_ucb_upper(0.0, 0.37) == 0.37);
  CHECK(kl_ucb_upper(4.2, 0.0) == 4.2);
  CHECK_THROWS_AS(kl_ucb_upper(1.0, -0.1), InputError);
  for (double mu : {0.01, 0.5, 3.0, 40.0}) {
    for (double b : {1e-4, 0.3, 7.0}) {
      CAPTURE(mu);
      CAPTURE(b);
      CHECK(std::abs(kl_ucb_upper(mu, b) - newton_upper(mu, b)) < 1e-8);
    }
  }
}

TEST_CASE("kl_ucb_upper: inversion and monotonicity properties") {
  auto checks = check_klucb_inversion(100);
  auto more = check_klucb_monotonicity(10000, 3);
  checks.insert(checks.end(), more.begin(), more.end());
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CAPTURE(c.measured);
    CHECK(c.passed);
  }
}

TEST_CASE("d_ucb_select examples") {
  CHECK(d_ucb_select(std::vector<ArmStats>{arm(1.0, 3)}, 100) == 0);
  CHECK(d_ucb_select(std::vector<ArmStats>{arm(0, 1), arm(0, 1)}, 100) == 0);

  const double b1 = 3.0 * std::log(100.0) / 50.0;
  CHECK(b1 == doctest::Approx(0.2763).epsilon(1e-3));
  const double u1 = newton_upper(2.0, b1);
  CHECK(u1 == doctest::Approx(3.2430).epsilon(1e-4));
  CHECK(kl_ucb_upper(2.0, b1) == doctest::Approx(u1).epsilon(1e-9));
  CHECK(kl_ucb_upper(0.0, 3.0 * std::log(100.0)) == doctest::Approx(13.8).epsilon(2e-3));
  CHECK(d_ucb_select(std::vector<ArmStats>{arm(2, 50), arm(0, 1)}, 100) == 1);
}

TEST_CASE("ucb_double_step: a truncated first probe ends the episode") {
  // Threshold after one probe is 1/T + sqrt(ln T / 4); below 1 up to T = 45.
  for (double T : {8.0, 20.0, 45.0}) {
    CAPTURE(T);
    EpisodeState s = EpisodeState::start(T);
    std::vector<ArmStats> arms = {arm(3, 1)};
    CHECK(episode_threshold(T, 1) < 1.0);
    CHECK(ucb_double_step(s, arms, true, T) == EpisodeOutcome::NewEpisode);
    CHECK(s.episode == 1);
    CHECK(s.level == doctest::Approx(2.0 * std::log(T)));
    CHECK(s.clock == 0);
    CHECK(arms[0].pulls == 0);
  }
  EpisodeState s = EpisodeState::start(46.0);
  std::vector<ArmStats> arms = {arm(3, 1)};
  CHECK(episode_threshold(46.0, 1) > 1.0);
  CHECK(ucb_double_step(s, arms, true, 46.0) == EpisodeOutcome::Continue);
}

TEST_CASE("ucb_double_step: no truncation never ends an episode") {
  const double T = 1000;
  EpisodeState s = EpisodeState::start(T);
  std::vector<ArmStats> arms = {arm(1, 1), arm(2, 1)};
  for (int i = 0; i < 5000; ++i) CHECK(ucb_double_step(s, arms, false, T) == EpisodeOutcome::Continue);
  CHECK(s.episode == 0);
  CHECK(s.p_hat == 0.0);
  CHECK(s.probe_level() == 7);
}

TEST_CASE("ucb_double_step: p_hat 0.01 at t_q = 200 continues") {
  const double T = 100;
  EpisodeState s = EpisodeState::start(T);
  s.clock = 199;
  s.exceed_count = 2;
  std::vector<ArmStats> arms = {arm(1, 1)};
  CHECK(ucb_double_step(s, arms, false, T) == EpisodeOutcome::Continue);
  CHECK(s.clock == 200);
  CHECK(s.p_hat == doctest::Approx(0.01));
  CHECK(episode_threshold(T, 200) == doctest::Approx(0.01 + std::sqrt(std::log(100.0) / 402)));
  CHECK(episode_threshold(T, 200) == doctest::Approx(0.117).epsilon(0.01));
}

TEST_CASE("ucb_double_step: levels double and initialization gates the check") {
  const double T = 10;
  EpisodeState s = EpisodeState::start(T);
  std::vector<ArmStats> arms = {arm(1, 1), ArmStats{}};
  CHECK(ucb_double_step(s, arms, true, T) == EpisodeOutcome::Continue);
  arms[1] = arm(1, 1);
  double level = s.level;
  for (int q = 0; q < 5; ++q) {
    while (ucb_double_step(s, arms, true, T) == EpisodeOutcome::Continue) {
    }
    CHECK(s.level == doctest::Approx(2.0 * level));
    level = s.level;
    arms = {arm(1, 1), arm(1, 1)};
  }
  CHECK(s.episode == 5);
}

TEST_CASE("d_ucb_double_step: periods and growing action sets") {
  Rng rng = make_stream(4, 0);
  GrowingActionSet s = GrowingActionSet::create(1000, 0.5, 2.0);
  CHECK(s.batch_size() == 1);
  std::vector<VertexId> previous;
  for (std::int64_t t = 1; t <= 100; ++t) {
    if (d_ucb_double_step(s, t, rng)) {
      CHECK(std::includes(s.action_set.begin(), s.action_set.end(), previous.begin(), previous.end()));
      CHECK(s.action_set.size() <= previous.size() + 1);
      previous = s.action_set;
    }
  }
  CHECK(s.period == 7);
  CHECK(GrowingActionSet::create(1000, 0.2, 4.0).batch_size() == 7);
  CHECK_THROWS_AS(GrowingActionSet::create(1000, 0.5, 1.5), InputError);
}

TEST_CASE("default_k_of_n examples") {
  CHECK(default_k_of_n(2) == 1);
  CHECK(default_k_of_n(1024) == 100);
  CHECK(default_k_of_n(1 << 16) == 256);
  CHECK_THROWS_AS(default_k_of_n(1), InputError);
}

TEST_CASE("kl-UCB pull counts stay below the theoretical bound") {
  for (const auto& c : check_pull_bound(10000, 100, 5)) {
    CAPTURE(c.name);
    CAPTURE(c.measured);
    CHECK(c.passed);
  }
}
