#include "oim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "oim/bandit.hpp"
#include "oim/branching.hpp"
#include "oim/estimates.hpp"
#include "oim/explorer.hpp"
#include "oim/policies.hpp"
#include "oim/stats.hpp"

namespace oim {
namespace {

std::int64_t scaled(std::int64_t samples, double scale) {
  return std::max<std::int64_t>(1000, std::llround(static_cast<double>(samples) * scale));
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

CheckResult make(std::string name, bool passed, double measured, double bound, std::string detail = {}) {
  return CheckResult{std::move(name), passed, measured, bound, std::move(detail)};
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_symmetric(Rng& rng, int size, double lo, double hi) {
  Matrix m(size, std::vector<double>(size));
  for (int a = 0; a < size; ++a) {
    for (int b = a; b < size; ++b) m[a][b] = m[b][a] = uniform(rng, lo, hi);
  }
  return m;
}

GraphModel random_small_model(int index, Rng& rng) {
  const std::int64_t n = std::uniform_int_distribution<std::int64_t>(2, 6)(rng);
  const auto nd = static_cast<double>(n);
  switch (index % 3) {
    case 0: {
      const int blocks = std::uniform_int_distribution<int>(1, static_cast<int>(std::min<std::int64_t>(3, n)))(rng);
      // Random composition of n into `blocks` positive parts.
      auto cuts = sample_without_replacement(n - 1, blocks - 1, rng);
      std::vector<std::int64_t> sizes;
      std::int64_t prev = 0;
      for (VertexId c : cuts) {
        sizes.push_back(c + 1 - prev);
        prev = c + 1;
      }
      sizes.push_back(n - prev);
      return SbmModel(sizes, random_symmetric(rng, blocks, 0.5, 0.9 * nd));
    }
    case 1: {
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& x : w) x = uniform(rng, 0.3, 0.95 * std::sqrt(nd));
      return ChungLuModel(std::move(w));
    }
    default:
      return GridKernelModel(n, random_symmetric(rng, n >= 3 ? 3 : 2, 0.0, nd));
  }
}

std::vector<VertexId> all_vertices(std::int64_t n) {
  std::vector<VertexId> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), VertexId{0});
  return v;
}

SbmModel single_block(std::int64_t n, double c) { return SbmModel({n}, Matrix{{c}}); }

ChungLuModel weight_classes(const std::vector<std::pair<double, std::int64_t>>& classes) {
  std::vector<double> w;
  for (const auto& [weight, count] : classes) w.insert(w.end(), static_cast<std::size_t>(count), weight);
  return ChungLuModel(std::move(w));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"dominance", "tails", "oracles", "klucb",
                                                 "monotonicity", "all"};
  return names;
}

CheckList check_oracle_agreement(int models, std::int64_t samples, std::uint64_t seed) {
  CheckList out;
  Rng gen = make_stream(seed, 0);
  for (int m = 0; m < models; ++m) {
    const GraphModel model = random_small_model(m, gen);
    const std::int64_t n = vertex_count(model);
    const auto exact = exact_component_means(model);
    Rng rng = make_stream(seed, 1 + static_cast<std::uint64_t>(m));
    const auto mc = estimate_component_means(model, all_vertices(n), samples, rng);
    double worst = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < mc.mean.size(); ++i) {
      const double diff = std::abs(mc.mean[i] - exact.mean[i]);
      if (mc.std_error[i] > 0.0) {
        worst = std::max(worst, diff / mc.std_error[i]);
        ok = ok && diff <= 3.0 * mc.std_error[i];
      } else {
        ok = ok && diff < 1e-12;
      }
    }
    out.push_back(make("oracle_agreement[" + model_kind(model) + ",n=" + std::to_string(n) + "]", ok,
                       worst, 3.0, "max |MC - exact| / stderr over vertices"));
  }
  return out;
}

CheckList check_er3_exact() {
  const auto est = exact_component_means(single_block(3, 1.5));
  // Component sizes of vertex 0 over the 8 equally likely edge subsets.
  const double table = (1 + 1 + 2 + 2 + 3 + 3 + 3 + 3) / 8.0;
  bool ok = true;
  double worst = 0.0;
  for (double c : est.mean) {
    ok = ok && c == table;
    worst = std::max(worst, std::abs(c - table));
  }
  return {make("er3_exact", ok, worst, 0.0, "max |c_i - 2.25|")};
}

CheckList check_klucb_inversion(int grid) {
  double worst = 0.0;
  for (int a = 0; a < grid; ++a) {
    const double mu = 100.0 * a / (grid - 1);
    for (int b = 1; b <= grid; ++b) {
      const double budget = 50.0 * b / grid;
      worst = std::max(worst, std::abs(poisson_kl(mu, kl_ucb_upper(mu, budget)) - budget));
    }
  }
  const double e = std::exp(1.0);
  const double known = std::abs(kl_ucb_upper(1.0, e - 2.0) - e);
  return {make("klucb_inversion", worst <= 1e-8, worst, 1e-8, "max |d(mu, U(mu, b)) - b| on grid"),
          make("klucb_known_value", known <= 1e-9, known, 1e-9, "|U(1, e - 2) - e|")};
}

CheckList check_klucb_monotonicity(int points, std::uint64_t seed) {
  Rng rng = make_stream(seed, 7);
  double worst_budget = 0.0, worst_mean = 0.0;
  for (int i = 0; i < points; ++i) {
    const double mu = uniform(rng, 0.0, 100.0);
    const double b = uniform(rng, 0.0, 50.0);
    const double step = uniform(rng, 0.0, 5.0);
    const double base = kl_ucb_upper(mu, b);
    worst_budget = std::max(worst_budget, base - kl_ucb_upper(mu, b + step));
    worst_mean = std::max(worst_mean, base - kl_ucb_upper(mu + step, b));
  }
  // Bisection resolves U to 1e-9, so decreases below that are noise.
  return {make("klucb_monotone_budget", worst_budget <= 2e-9, worst_budget, 2e-9),
          make("klucb_monotone_mean", worst_mean <= 2e-9, worst_mean, 2e-9)};
}

CheckList check_poisson_dominance(std::int64_t draws, std::uint64_t seed) {
  const std::vector<std::pair<GraphModel, VertexId>> cases = {
      {SbmModel({50, 50}, Matrix{{3.0, 1.0}, {1.0, 2.0}}), 0},
      {SbmModel({50, 50}, Matrix{{3.0, 1.0}, {1.0, 2.0}}), 50},
      {weight_classes({{0.5, 40}, {1.5, 40}, {3.0, 20}}), 0},
      {weight_classes({{0.5, 40}, {1.5, 40}, {3.0, 20}}), 40},
      {weight_classes({{0.5, 40}, {1.5, 40}, {3.0, 20}}), 80},
  };
  const double grid[] = {-1.0, -0.5, 0.5, 1.0};
  CheckList out;
  std::uint64_t stream = 0;
  for (const auto& [model, v] : cases) {
    const EdgeSampler sampler(model);
    ComponentExplorer explorer(sampler);
    Rng rng = make_stream(seed, stream++);
    std::vector<std::int64_t> degrees(static_cast<std::size_t>(draws));
    for (auto& d : degrees) d = explorer.degree(v, rng);
    const double mu = expected_degree(model, v);
    for (double s : grid) {
      std::vector<double> values(degrees.size());
      for (std::size_t i = 0; i < degrees.size(); ++i) values[i] = std::exp(s * static_cast<double>(degrees[i]));
      const MeanError me = mean_and_error(values);
      const double bound = std::exp(mu * std::expm1(s));
      out.push_back(make("poisson_dominance[" + model_kind(model) + ",v=" + std::to_string(v) +
                             ",s=" + fmt(s) + "]",
                         me.mean <= bound + 3.0 * me.std_error, me.mean, bound + 3.0 * me.std_error,
                         "empirical MGF vs exp(mu (e^s - 1)) + 3 stderr"));
    }
  }
  return out;
}

CheckList check_subcritical_tail(std::int64_t n, double c, std::int64_t samples, std::uint64_t seed) {
  const SbmModel model = single_block(n, c);
  const EdgeSampler sampler(GraphModel{model});
  ComponentExplorer explorer(sampler);
  Rng rng = make_stream(seed, 11);
  std::vector<std::int64_t> exceed(21, 0);
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::int64_t size = explorer.component_size(0, rng);
    for (std::int64_t u = 1; u <= 20 && size > u; ++u) ++exceed[static_cast<std::size_t>(u)];
  }
  std::vector<double> us, logs;
  for (int u = 1; u <= 20; ++u) {
    if (exceed[u] == 0) {
      return {make("subcritical_tail", false, 0.0, 0.95,
                   "no sample exceeded u = " + std::to_string(u) + "; log-survival undefined")};
    }
    us.push_back(u);
    logs.push_back(std::log(static_cast<double>(exceed[u]) / static_cast<double>(samples)));
  }
  const LinearFit fit = linear_fit(us, logs);
  return {make("subcritical_tail_slope", fit.slope < 0.0, fit.slope, 0.0, "slope of log P(|C| > u)"),
          make("subcritical_tail_r2", fit.r_squared >= 0.95, fit.r_squared, 0.95, "R^2 of the linear fit")};
}

CheckList check_degree_influence(std::int64_t samples, std::uint64_t seed) {
  const std::vector<std::pair<std::string, GraphModel>> cases = {
      {"sbm_subcritical", SbmModel({100, 100}, Matrix{{1.2, 0.2}, {0.2, 0.6}}, true)},
      {"sbm_supercritical", SbmModel({100, 100}, Matrix{{4.0, 1.0}, {1.0, 2.0}}, true)},
      {"chung_lu_subcritical", weight_classes({{0.4, 100}, {0.8, 60}, {1.2, 40}})},
      {"chung_lu_supercritical", weight_classes({{1.0, 100}, {2.0, 60}, {3.0, 40}})},
  };
  CheckList out;
  std::uint64_t stream = 0;
  for (const auto& [label, model] : cases) {
    Rng rng = make_stream(seed, 100 + stream++);
    const auto est = estimate_class_means(model, samples, rng);
    std::vector<double> mu;
    for (VertexId rep : est.nodes) mu.push_back(expected_degree(model, rep));
    const auto top_mu = static_cast<std::size_t>(std::max_element(mu.begin(), mu.end()) - mu.begin());
    const auto top_c = static_cast<std::size_t>(std::max_element(est.mean.begin(), est.mean.end()) - est.mean.begin());
    // Separation of the top class from the runner-up, in standard errors.
    double z = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < est.mean.size(); ++k) {
      if (k == top_c) continue;
      const double se = std::hypot(est.std_error[k], est.std_error[top_c]);
      z = std::min(z, (est.mean[top_c] - est.mean[k]) / se);
    }
    const std::string crit = to_string(criticality(model).regime);
    out.push_back(make("degree_influence[" + label + "]", top_mu == top_c && z >= 3.0, z, 3.0,
                       "regime " + crit + "; argmax mu class " + std::to_string(top_mu) +
                           ", argmax c class " + std::to_string(top_c) + "; separation in sigma"));
  }
  return out;
}

CheckList check_pull_bound(std::int64_t horizon, int replications, std::uint64_t seed) {
  const std::vector<double> means = {3.0, 2.0, 2.0, 1.0, 1.0};
  std::vector<double> total(means.size(), 0.0);
  for (int r = 0; r < replications; ++r) {
    Rng rng = make_stream(seed, 200 + static_cast<std::uint64_t>(r));
    DUcb policy(all_vertices(static_cast<std::int64_t>(means.size())));
    const ProbeFn probe = [&means](VertexId arm, const FeedbackKind&, Rng& g) {
      RoundProbe p;
      p.observation = static_cast<double>(
          std::poisson_distribution<std::int64_t>(means[static_cast<std::size_t>(arm)])(g));
      return p;
    };
    for (VertexId a : run_policy(policy, horizon, probe, rng)) total[static_cast<std::size_t>(a)] += 1.0;
  }
  CheckList out;
  const double best = means[0];
  const double logT = std::log(static_cast<double>(horizon));
  for (std::size_t i = 1; i < means.size(); ++i) {
    const double eta = (best - means[i]) / 3.0;
    const double bound = best * (2.0 + 6.0 * logT) / (eta * eta) + 3.0;
    const double pulls = total[i] / replications;
    out.push_back(make("pull_bound[arm=" + std::to_string(i) + ",mu=" + fmt(means[i]) + "]", pulls <= bound,
                       pulls, bound, "mean pulls of a suboptimal arm"));
  }
  return out;
}

CheckList check_supercritical_structure(std::int64_t samples, std::uint64_t seed) {
  const SbmModel sbm({250, 250}, Matrix{{5.0, 0.3}, {0.3, 0.8}}, true);
  const GraphModel model = sbm;
  const auto n = static_cast<double>(sbm.n());
  const BranchingModel branching = BranchingModel::from_graph(model);
  const SurvivalResult survival = survival_fixed_point(branching);
  const SymmetryClasses sym = symmetry_classes(model);
  double mass = 0.0;
  for (int c = 0; c < sym.count(); ++c) mass += survival.rho[c] * static_cast<double>(sym.size[c]);
  Rng rng = make_stream(seed, 300);
  const auto est = estimate_class_means(model, samples, rng);
  CheckList out;
  for (int c = 0; c < sym.count(); ++c) {
    const double predicted = survival.rho[c] * mass / n;
    const double measured = est.mean[c] / n;
    out.push_back(make("supercritical_structure[block=" + std::to_string(c) + "]",
                       std::abs(measured - predicted) <= 0.05, std::abs(measured - predicted), 0.05,
                       "c/n = " + fmt(measured) + " vs rho sum(rho)/n = " + fmt(predicted)));
  }
  return out;
}

CheckList check_component_progeny_dominance(std::int64_t samples, std::uint64_t seed) {
  const std::vector<GraphModel> models = {
      single_block(6, 2.4),
      SbmModel({3, 3}, Matrix{{4.0, 1.0}, {1.0, 2.0}}),
      weight_classes({{1.0, 2}, {1.6, 2}, {2.2, 1}}),
      GridKernelModel(5, Matrix{{3.0, 0.5}, {0.5, 1.5}}),
  };
  CheckList out;
  std::uint64_t stream = 0;
  for (const auto& model : models) {
    const std::int64_t n = vertex_count(model);
    const EdgeSampler sampler(model);
    ComponentExplorer explorer(sampler);
    const BranchingModel branching = BranchingModel::from_graph(model, RateRule::Dominating);
    Rng rng = make_stream(seed, 400 + stream++);
    std::vector<double> cdf_c(static_cast<std::size_t>(n) + 1, 0.0), cdf_b(cdf_c.size(), 0.0);
    for (std::int64_t s = 0; s < samples; ++s) {
      const std::int64_t size = explorer.component_size(0, rng);
      for (std::int64_t u = size; u <= n; ++u) cdf_c[static_cast<std::size_t>(u)] += 1.0;
      const ProgenyResult r = total_progeny(branching, branching.class_of()[0], kDefaultProgenyCap, rng);
      if (const auto* f = std::get_if<Finite>(&r)) {
        for (std::int64_t u = f->total; u <= n; ++u) cdf_b[static_cast<std::size_t>(u)] += 1.0;
      }
    }
    const auto N = static_cast<double>(samples);
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::int64_t u = 1; u <= n; ++u) {
      const double fc = cdf_c[static_cast<std::size_t>(u)] / N;
      const double fb = cdf_b[static_cast<std::size_t>(u)] / N;
      const double band = 3.0 * std::sqrt((fc * (1 - fc) + fb * (1 - fb)) / N);
      worst = std::max(worst, fb - fc - band);
      ok = ok && fc >= fb - band;
    }
    out.push_back(make("component_progeny_dominance[" + model_kind(model) + ",n=" + std::to_string(n) + "]",
                       ok, worst, 0.0, "max over u of F_B(u) - F_C(u) - 3 sigma"));
  }
  return out;
}

CheckList check_mean_gap(std::int64_t samples, std::uint64_t seed) {
  CheckList out;
  double previous = std::numeric_limits<double>::infinity();
  std::string trail;
  bool decreasing = true;
  for (std::int64_t n : {50, 100, 200}) {
    const GraphModel model = single_block(n, 0.5);
    const double x = expected_progeny_linear(BranchingModel::from_graph(model))[0];
    Rng rng = make_stream(seed, 500 + static_cast<std::uint64_t>(n));
    const auto est = estimate_component_means(model, {0}, samples, rng);
    const double gap = std::abs(x - est.mean[0]);
    const double bound = 5.0 / static_cast<double>(n);
    out.push_back(make("mean_gap[n=" + std::to_string(n) + "]", gap < bound, gap, bound,
                       "|x_i - c_i| with stderr " + fmt(est.std_error[0])));
    decreasing = decreasing && gap < previous;
    previous = gap;
    trail += (trail.empty() ? "" : " > ") + fmt(gap);
  }
  out.push_back(make("mean_gap_decreasing", decreasing, previous, 0.0, trail));
  return out;
}

CheckList check_branching_duality(std::int64_t samples, std::uint64_t seed) {
  const BranchingModel super(Matrix{{2.0}});
  const double rho = survival_fixed_point(super).rho[0];
  const BranchingModel dual(Matrix{{2.0 * (1.0 - rho)}});
  Rng rng = make_stream(seed, 600);
  // Bins 1..10 and a lumped tail.
  std::vector<std::int64_t> a(11, 0), b(11, 0);
  auto bin = [](std::int64_t total) { return static_cast<std::size_t>(std::min<std::int64_t>(total, 11) - 1); };
  std::int64_t finite = 0;
  while (finite < samples) {
    const ProgenyResult r = total_progeny(super, 0, 10000, rng);
    if (const auto* f = std::get_if<Finite>(&r)) {
      ++a[bin(f->total)];
      ++finite;
    }
  }
  for (std::int64_t s = 0; s < samples; ++s) {
    const ProgenyResult r = total_progeny(dual, 0, 10000, rng);
    ++b[bin(std::get<Finite>(r).total)];
  }
  const ChiSquareResult chi = chi_square_two_sample(a, b);
  return {make("branching_duality", chi.p_value >= 1e-3, chi.p_value, 1e-3,
               "two-sample chi-square p-value, dof " + std::to_string(chi.dof))};
}

CheckList check_lazy_eager(std::int64_t draws, std::uint64_t seed) {
  const std::vector<GraphModel> models = {
      SbmModel({15, 15}, Matrix{{6.0, 2.0}, {2.0, 3.0}}),
      weight_classes({{1.0, 10}, {2.0, 10}, {4.0, 10}}),
  };
  CheckList out;
  std::uint64_t stream = 0;
  for (const auto& model : models) {
    const std::int64_t n = vertex_count(model);
    const EdgeSampler sampler(model);
    ComponentExplorer explorer(sampler);
    Rng rng = make_stream(seed, 700 + stream++);
    std::vector<std::int64_t> lazy(static_cast<std::size_t>(n), 0), eager(static_cast<std::size_t>(n), 0);
    for (std::int64_t s = 0; s < draws; ++s) {
      ++lazy[explorer.neighbors(0, rng).size()];
      ++eager[sample_full_graph(model, rng)[0].size()];
    }
    const ChiSquareResult chi = chi_square_two_sample(lazy, eager);
    out.push_back(make("lazy_eager[" + model_kind(model) + "]", chi.p_value >= 1e-3, chi.p_value, 1e-3,
                       "two-sample chi-square p-value on degree of vertex 0"));
  }
  return out;
}

CheckList check_structural_monotonicity() {
  CheckList out;
  {
    const KroneckerModel k(8, 0.9, 0.5, 0.6, true);
    std::vector<double> by_weight(9, -1.0);
    bool ok = true;
    for (VertexId v = 0; v < k.n(); ++v) {
      const double mu = expected_degree(GraphModel{k}, v);
      auto& slot = by_weight[static_cast<std::size_t>(k.weight(v))];
      if (slot < 0.0) slot = mu;
      ok = ok && std::abs(slot - mu) < 1e-9;
    }
    for (std::size_t l = 1; l < by_weight.size(); ++l) ok = ok && by_weight[l] > by_weight[l - 1];
    out.push_back(make("kronecker_degree_ordering", ok, by_weight.back(), by_weight.front(),
                       "mu strictly increasing in string weight"));
  }
  {
    const double s = 1.5;
    const Matrix K{{1.2, 0.3}, {0.3, 0.7}};
    Matrix Ks = K;
    for (auto& row : Ks) for (double& x : row) x *= s;
    const double a = criticality(SbmModel({40, 60}, K)).operator_norm;
    const double b = criticality(SbmModel({40, 60}, Ks)).operator_norm;
    out.push_back(make("criticality_scaling[sbm]", b > a, b, a));
    std::vector<double> w = {0.5, 0.5, 1.0, 1.0, 1.5, 1.5, 2.0, 2.0}, ws = w;
    for (double& x : ws) x *= std::sqrt(s);
    const double c = criticality(ChungLuModel(w)).operator_norm;
    const double d = criticality(ChungLuModel(ws)).operator_norm;
    out.push_back(make("criticality_scaling[chung_lu]", d > c, d, c));
    const double e = criticality(GridKernelModel(20, K)).operator_norm;
    const double f = criticality(GridKernelModel(20, Ks)).operator_norm;
    out.push_back(make("criticality_scaling[grid]", f > e, f, e));
  }
  return out;
}

CheckList run_suite(std::string_view suite, const ValidationOptions& o) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw InputError("unknown validation suite '" + std::string(suite) + "'");
  }
  const auto k = [&](std::int64_t samples) { return scaled(samples, o.scale); };
  const bool all = suite == "all";
  CheckList out;
  auto append = [&out](CheckList more) { out.insert(out.end(), more.begin(), more.end()); };
  if (all || suite == "dominance") {
    append(check_poisson_dominance(k(100000), o.seed));
    append(check_component_progeny_dominance(k(100000), o.seed));
  }
  if (all || suite == "tails") {
    append(check_subcritical_tail(2000, 0.5, k(100000), o.seed));
    append(check_mean_gap(k(1000000), o.seed));
    append(check_branching_duality(k(100000), o.seed));
  }
  if (all || suite == "oracles") {
    append(check_er3_exact());
    append(check_oracle_agreement(10, k(100000), o.seed));
    append(check_lazy_eager(k(100000), o.seed));
    append(check_supercritical_structure(k(20000), o.seed));
  }
  if (all || suite == "klucb") {
    append(check_klucb_inversion(100));
    append(check_klucb_monotonicity(10000, o.seed));
    append(check_pull_bound(10000, static_cast<int>(std::max<std::int64_t>(10, std::llround(100 * o.scale))),
                            o.seed));
  }
  if (all || suite == "monotonicity") {
    append(check_degree_influence(k(100000), o.seed));
    append(check_structural_monotonicity());
  }
  return out;
}

}  // namespace oim
