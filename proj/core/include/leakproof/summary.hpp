#pragma once

#include <span>
#include <string>
#include <vector>

#include "leakproof/metrics.hpp"
#include "leakproof/sweep.hpp"

namespace leakproof {

/// Seed-averaged sweep results of one model, as stored in sweep_summary.csv.
struct SweepSummary {
  std::string model;
  std::vector<WindowSummary> windows;
};

SweepSummary Summarise(const SweepReport& report);

/// Lowest and highest percent change against the future_windows = 0 run.
struct ChangeRange {
  std::string model;
  bool empty = true;  ///< only the reference config was run
  double min_hr = 0.0;
  double max_hr = 0.0;
  double min_ndcg = 0.0;
  double max_ndcg = 0.0;
};

struct RankTable {
  int future_windows = 0;
  std::vector<ModelRank> ranks;  ///< by HR
};

struct SummaryTables {
  std::vector<ChangeRange> changes;
  std::vector<RankTable> ranks;
};

/// Throws UsageError when a model has no future_windows = 0 reference.
SummaryTables Summarize(std::span<const SweepSummary> sweeps);

}  // namespace leakproof
