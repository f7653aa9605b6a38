#include <benchmark/benchmark.h>

#include "oim/estimates.hpp"
#include "oim/harness.hpp"

namespace {

const oim::GraphModel& sub_model() {
  static const oim::GraphModel m =
      oim::SbmModel({1400, 600}, oim::Matrix{{1.0, 0.1}, {0.1, 0.2}}, true);
  return m;
}

template <bool Serial>
void BM_ComponentMeans(benchmark::State& state) {
  const std::vector<oim::VertexId> nodes = {0, 1399, 1400};
  const auto samples = state.range(0);
  for (auto _ : state) {
    oim::Rng rng = oim::make_stream(7, 0);
    auto e = Serial ? oim::estimate_component_means_serial(sub_model(), nodes, samples, rng)
                    : oim::estimate_component_means(sub_model(), nodes, samples, rng);
    benchmark::DoNotOptimize(e.mean.data());
  }
  state.SetItemsProcessed(state.iterations() * samples * static_cast<std::int64_t>(nodes.size()));
}

template <bool Serial>
void BM_Experiment(benchmark::State& state) {
  oim::AlgorithmConfig algo;
  algo.name = "d_ucb";
  algo.alpha = 0.5;
  algo.horizon = state.range(0);
  oim::ExperimentSettings settings;
  settings.replications = 16;
  settings.seed = 11;
  settings.estimate_samples = 0;
  for (auto _ : state) {
    auto r = Serial ? oim::run_experiment_serial(sub_model(), algo, settings)
                    : oim::run_experiment(sub_model(), algo, settings);
    benchmark::DoNotOptimize(r.traces.data());
  }
  state.SetItemsProcessed(state.iterations() * settings.replications * algo.horizon);
}

}  // namespace

BENCHMARK_TEMPLATE(BM_ComponentMeans, true)->Name("component_means/serial")->Arg(2000)->Arg(20000)->UseRealTime();
BENCHMARK_TEMPLATE(BM_ComponentMeans, false)->Name("component_means/omp")->Arg(2000)->Arg(20000)->UseRealTime();
BENCHMARK_TEMPLATE(BM_Experiment, true)->Name("experiment/serial")->Arg(1000)->UseRealTime();
BENCHMARK_TEMPLATE(BM_Experiment, false)->Name("experiment/omp")->Arg(1000)->UseRealTime();

BENCHMARK_MAIN();
