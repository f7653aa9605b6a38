#pragma once

// JSON experiment configuration with sections model, algorithm and
// experiment, plus dotted-path overrides such as algorithm.alpha=0.3.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oim/harness.hpp"

namespace oim {

/// Malformed or invalid configuration. Line and column are 1-based and 0
/// when the error is not tied to a position in the text.
class ConfigError : public InputError {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : InputError(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ExperimentConfig {
  GraphModel model;
  AlgorithmConfig algorithm;
  ExperimentSettings experiment;
  /// Document after overrides; recorded verbatim in run metadata.
  nlohmann::json document;
};

nlohmann::json parse_config_text(std::string_view text);

/// Throws ConfigError naming the path if the file cannot be read.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Applies "section.key=value". The value is read as JSON when it parses,
/// as a string otherwise. The key must belong to the schema.
void apply_override(nlohmann::json& document, std::string_view assignment);

/// Validates the document (unknown keys are errors) and builds the config.
ExperimentConfig build_config(const nlohmann::json& document);

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

GraphModel model_from_json(const nlohmann::json& model);
nlohmann::json model_to_json(const GraphModel& model);
nlohmann::json algorithm_to_json(const AlgorithmConfig& algo);
nlohmann::json settings_to_json(const ExperimentSettings& settings);

/// Block sizes from proportions by largest-remainder rounding; they sum to n.
std::vector<std::int64_t> largest_remainder_sizes(std::int64_t n, const std::vector<double>& fractions);

}  // namespace oim
