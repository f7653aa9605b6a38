#include "oim/persist.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "oim/config.hpp"

namespace oim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw PersistError("write failed for '" + path.string() + "'");
}

json metadata(const ExperimentResult& r, const json& document) {
  json meta;
  meta["library_version"] = OIM_VERSION;
  meta["config"] = document;
  meta["config_digest"] = r.config_digest;
  meta["algorithm"] = r.algorithm;
  meta["n"] = r.n;
  meta["criticality"] = {{"regime", to_string(r.criticality.regime)},
                         {"operator_norm", r.criticality.operator_norm},
                         {"tolerance", r.criticality.tolerance}};
  meta["replications"] = r.traces.size();
  json seeds = json::array();
  for (const auto& t : r.traces) seeds.push_back({{"replication", t.replication}, {"seed", t.seed}});
  meta["replication_streams"] = seeds;
  if (r.estimates) {
    const auto& e = *r.estimates;
    meta["estimates"] = {{"method", to_string(e.method)},
                         {"samples_per_class", e.samples},
                         {"classes", e.nodes.size()},
                         {"representatives", e.nodes},
                         {"mean", e.mean},
                         {"std_error", e.std_error}};
  } else {
    meta["estimates"] = nullptr;
  }
  if (r.baseline) {
    meta["baseline"] = {{"c_star_alpha", r.baseline->c_star_alpha},
                        {"c_max", r.baseline->c_max},
                        {"near_optimal_count", r.baseline->near_optimal.size()}};
  } else {
    meta["baseline"] = nullptr;
  }
  return meta;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw PersistError("missing results file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw PersistError("unexpected header in '" + path.string() + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

std::vector<fs::path> persist_results(const ExperimentResult& result, const json& config_document,
                                      const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw PersistError("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<fs::path> written;

  const bool has_regret = !result.traces.empty() && !result.traces.front().cumulative_regret.empty();
  json meta = metadata(result, config_document);
  json files = json::array({"metadata.json"});
  if (!result.traces.empty()) {
    if (has_regret) files.insert(files.end(), {"regret.csv", "regret_aux.csv"});
    files.push_back("pulls.csv");
  }
  meta["files"] = files;
  {
    const fs::path path = out_dir / "metadata.json";
    auto out = open_out(path);
    out << meta.dump(2) << '\n';
    finish(out, path);
    written.push_back(path);
  }
  if (result.traces.empty()) return written;

  const auto n = static_cast<double>(result.n);
  if (has_regret) {
    const RegretSummary s = aggregate_regret(result.traces);
    const fs::path path = out_dir / "regret.csv";
    auto out = open_out(path);
    out << kRegretHeader << '\n';
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
      out << t + 1 << ',' << num(s.mean[t]) << ',' << num(s.std_error[t]) << ',' << num(s.mean[t] / n)
          << '\n';
    }
    finish(out, path);
    written.push_back(path);

    const fs::path aux_path = out_dir / "regret_aux.csv";
    auto aux = open_out(aux_path);
    const bool full = !s.mean_full.empty();
    aux << "round,mean_cum_regret_unclamped" << (full ? ",mean_cum_regret_full" : "") << '\n';
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
      aux << t + 1 << ',' << num(s.mean_unclamped[t]);
      if (full) aux << ',' << num(s.mean_full[t]);
      aux << '\n';
    }
    finish(aux, aux_path);
    written.push_back(aux_path);
  }
  {
    const fs::path path = out_dir / "pulls.csv";
    auto out = open_out(path);
    out << "vertex,total_pulls,mean_pulls" << (result.estimates ? ",c_hat" : "") << '\n';
    const auto reps = static_cast<double>(result.traces.size());
    for (const auto& [v, count] : pull_counts(result.traces)) {
      out << v << ',' << count << ',' << num(static_cast<double>(count) / reps);
      if (result.estimates) out << ',' << num(*result.estimates->mean_of(v));
      out << '\n';
    }
    finish(out, path);
    written.push_back(path);
  }
  return written;
}

PlotData write_plot_data(const fs::path& dir) {
  const fs::path meta_path = dir / "metadata.json";
  std::ifstream in(meta_path);
  if (!in) throw PersistError("no persisted run in '" + dir.string() + "' (metadata.json missing)");
  json meta = json::parse(in, nullptr, false);
  if (meta.is_discarded() || !meta.is_object() || !meta.contains("files")) {
    throw PersistError("corrupt metadata in '" + meta_path.string() + "'");
  }
  std::set<std::string> files;
  for (const auto& f : meta["files"]) files.insert(f.get<std::string>());

  PlotData out;
  try {
    if (files.count("regret.csv")) {
      const auto rows = read_csv(dir / "regret.csv", kRegretHeader);
      const auto T = static_cast<std::int64_t>(rows.size());
      out.stride = std::max<std::int64_t>(1, (T + kPlotRows - 1) / kPlotRows);
      const fs::path path = dir / "regret_curve.csv";
      auto curve = open_out(path);
      curve << kRegretHeader << '\n';
      for (std::int64_t t = out.stride; t <= T; t += out.stride) {
        const auto& row = rows[static_cast<std::size_t>(t - 1)];
        if (row.size() != 4 || std::stoll(row[0]) != t) {
          throw PersistError("corrupt row " + std::to_string(t) + " in regret.csv");
        }
        for (std::size_t c = 1; c < 4; ++c) std::stod(row[c]);
        curve << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << '\n';
        ++out.curve_rows;
      }
      finish(curve, path);
      out.written.push_back(path);
    }
    if (files.count("pulls.csv")) {
      std::ifstream pin(dir / "pulls.csv");
      std::string header;
      if (!pin || !std::getline(pin, header) || header.rfind("vertex,total_pulls,mean_pulls", 0) != 0) {
        throw PersistError("missing or corrupt pulls.csv in '" + dir.string() + "'");
      }
      std::vector<std::pair<std::string, std::int64_t>> pulls;
      std::int64_t total = 0;
      std::string line;
      while (std::getline(pin, line)) {
        if (line.empty()) continue;
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos) throw PersistError("corrupt pulls.csv row");
        const std::int64_t count = std::stoll(line.substr(a + 1, b - a - 1));
        pulls.emplace_back(line.substr(0, a), count);
        total += count;
      }
      const fs::path path = dir / "pull_histogram.csv";
      auto hist = open_out(path);
      hist << "vertex,total_pulls,fraction\n";
      for (const auto& [v, c] : pulls) {
        hist << v << ',' << c << ',' << num(total > 0 ? static_cast<double>(c) / static_cast<double>(total) : 0.0)
             << '\n';
      }
      finish(hist, path);
      out.written.push_back(path);
    }
  } catch (const std::invalid_argument&) {
    throw PersistError("corrupt numeric field in results under '" + dir.string() + "'");
  } catch (const std::out_of_range&) {
    throw PersistError("corrupt numeric field in results under '" + dir.string() + "'");
  }
  if (out.written.empty()) throw PersistError("no data files listed in '" + meta_path.string() + "'");
  return out;
}

}  // namespace oim
