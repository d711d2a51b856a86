#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakproof/corpus.hpp"
#include "leakproof/metrics.hpp"
#include "leakproof/models.hpp"
#include "leakproof/random_search.hpp"
#include "leakproof/splits.hpp"

namespace leakproof {

/// Optional per-config hyperparameter search.
struct TuningConfig {
  std::size_t trials = 0;  ///< 0 disables tuning
  std::uint64_t seed = 0;
  BprSearchSpace bpr_space;
  std::size_t min_neighbors = 10;
  std::size_t max_neighbors = 200;
  /// Tune only at the first future-window config and reuse its optimum
  /// everywhere (required for similarity analyses).
  bool freeze_at_reference = false;
};

// Leakage-severity sweep over a fixed-window partition of the timeline.
//
// Windows have fixed length from t_start. For a test window w and f future
// windows, training holds every interaction in windows < w, the non-test
// interactions of window w, and every interaction in windows w+1..w+f. The
// test set is the leave-one-out test instances that fall inside window w.
struct SweepConfig {
  Timestamp window_length = kSecondsPerYear;
  int test_window = 4;
  int future_from = 0;
  int future_to = 0;
  ModelSpec model;
  std::string label;  ///< model name in reports; defaults to the model kind
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::size_t topn = 20;
  bool exclude_seen = true;
  TuningConfig tuning;
  std::size_t jobs = 1;

  std::string Label() const;
  /// All problems at once; empty when the config fits `d`.
  std::vector<std::string> Problems(const Dataset& d) const;
};

int WindowCount(const Dataset& d, Timestamp window_length);
int WindowOf(const Dataset& d, Timestamp t, Timestamp window_length);

struct SweepTrainingSet {
  std::vector<InteractionIndex> train;
  std::vector<InteractionIndex> test;
};

/// Throws UsageError when no test instance falls in the test window.
SweepTrainingSet BuildSweepTrainingSet(const Dataset& d, const Split& leave_one_out, const SweepConfig& cfg,
                                       int future_windows);

struct InstanceResult {
  InteractionIndex test = 0;
  UserId user;
  ItemId target;
  Timestamp asof = 0;
  RecommendationList list;
  int hit = 0;
  double ndcg = 0.0;
  std::size_t future_items = 0;
};

struct RunResult {
  int future_windows = 0;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  nlohmann::json params;
  AccuracyRecord accuracy;
  std::size_t future_item_total = 0;
  std::vector<InstanceResult> instances;
  double seconds = 0.0;
};

struct WindowSummary {
  int future_windows = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t seeds = 0;
  double mean_hr = 0.0;
  double mean_ndcg = 0.0;
  std::size_t total_future_items = 0;
};

struct SweepReport {
  std::string model;
  std::vector<RunResult> runs;  ///< ordered by (future_windows, seed)
  std::vector<WindowSummary> windows;

  const RunResult& Run(int future_windows, std::uint64_t seed) const;
  /// Lists of every seed per test instance, in test order.
  RunsPerInstance ListsFor(int future_windows) const;
};

SweepReport RunSweep(const Dataset& d, const SweepConfig& cfg);

struct SimilarityAnalysis {
  int reference_windows = 0;
  int compared_windows = 0;
  SimilarityDistribution intrinsic_reference;
  SimilarityDistribution intrinsic_compared;
  SimilarityDistribution extrinsic;
};

/// Intrinsic similarity of both configs and extrinsic similarity between them.
/// Both must share test instances and seed count.
SimilarityAnalysis AnalyzeSimilarity(const SweepReport& reference, int reference_windows, const SweepReport& compared,
                                     int compared_windows);

/// Runs fn(0..n-1) on up to `jobs` threads; rethrows the lowest-index failure.
void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace leakproof
