#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "leakproof/corpus.hpp"
#include "leakproof/splits.hpp"
#include "leakproof/sweep.hpp"
#include "leakproof/timeline.hpp"

namespace leakproof {

/// Every problem found in a configuration, reported together.
class ConfigError : public UsageError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Experiment configuration.
//
// Grammar: one `key = value` per line, `#` starts a comment, and a `[section]`
// header prefixes the following keys with `section.`. Keys are listed in
// README.md; unknown keys are errors. Relative paths resolve against the
// directory of the configuration file.
struct ExperimentConfig {
  std::filesystem::path dataset;
  Schema schema = ProcessedSchema();

  SweepConfig sweep;
  bool similarity = false;

  TimelineOptions timeline;
  SplitStrategy mask_strategy = SplitStrategy::kLeaveOneOut;
  SplitParams mask_params;
  std::uint64_t timeline_seed = 0;

  /// Normalised key/value pairs after overrides, for manifests.
  std::map<std::string, std::string> entries;
};

/// Raw `key = value` pairs (section-prefixed). Throws ConfigError on syntax errors.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

/// Builds a config from parsed pairs; `overrides` win over `values`.
ExperimentConfig BuildExperimentConfig(const std::map<std::string, std::string>& values,
                                       const std::map<std::string, std::string>& overrides = {},
                                       const std::filesystem::path& base_dir = {});

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      const std::map<std::string, std::string>& overrides = {});

}  // namespace leakproof
