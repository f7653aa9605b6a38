#pragma once

// Result files of an experiment and plot-ready derivatives.
//
//   metadata.json      config, seeds, version, criticality, baseline
//   regret.csv         round,mean_cum_regret,stderr,mean_cum_regret_over_n
//   regret_aux.csv     unclamped and (small n) full regret
//   pulls.csv          vertex,total_pulls,mean_pulls[,c_hat]

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oim/harness.hpp"

namespace oim {

inline constexpr const char* kRegretHeader = "round,mean_cum_regret,stderr,mean_cum_regret_over_n";
inline constexpr std::int64_t kPlotRows = 1000;

/// I/O failure or unreadable results; the message carries the path.
class PersistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes the result files into `out_dir` (created if needed) and returns
/// their paths. With no traces only metadata.json is written.
std::vector<std::filesystem::path> persist_results(const ExperimentResult& result,
                                                   const nlohmann::json& config_document,
                                                   const std::filesystem::path& out_dir);

struct PlotData {
  std::int64_t stride = 1;
  std::int64_t curve_rows = 0;
  std::vector<std::filesystem::path> written;
};

/// Reads a persisted run and writes regret_curve.csv (every stride-th round,
/// stride = ceil(T / 1000)) and pull_histogram.csv next to it. Throws
/// PersistError on missing or corrupt input.
PlotData write_plot_data(const std::filesystem::path& results_dir);

}  // namespace oim
