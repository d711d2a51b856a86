#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "leakproof/corpus.hpp"
#include "leakproof/metrics.hpp"
#include "leakproof/models.hpp"

namespace leakproof {

enum class TimelineMode { kTimeline, kPrequential, kSliding };

std::string_view ToString(TimelineMode mode);
TimelineMode ParseTimelineMode(std::string_view name);

struct TimelineOptions {
  TimelineMode mode = TimelineMode::kTimeline;
  std::size_t topn = 20;
  bool exclude_seen = true;
  /// Timeline mode: non-test events are fed to Update() in batches of this size.
  std::size_t batch_size = 1;
  /// Sliding mode: test window length and first boundary (t_start + window if unset).
  Timestamp window = kSecondsPerWeek;
  std::optional<Timestamp> origin;
};

struct TimelineRow {
  InteractionIndex index = 0;
  UserId user;
  ItemId target;
  Timestamp asof = 0;
  RecommendationList list;
  int hit = 0;
  double ndcg = 0.0;
  std::size_t future_items = 0;
  std::size_t consumed = 0;                 ///< interactions the model had consumed
  std::optional<Timestamp> max_consumed;    ///< latest consumed timestamp
  bool violation = false;
};

struct TimelineReport {
  TimelineMode mode = TimelineMode::kTimeline;
  std::vector<TimelineRow> rows;  ///< chronological test order
  std::size_t violations = 0;
  std::size_t skipped = 0;        ///< sliding mode: tests before the first boundary
  std::size_t refits = 0;         ///< sliding mode
  AccuracyRecord accuracy;
};

// Replays the log in chronological order against an incremental model.
//
// Events sharing a timestamp form one step: every test instance of the step
// is predicted first, from a model that has only consumed strictly earlier
// events, then the step's training events are consumed. Candidates at a
// prediction are catalog items released at or before the prediction time.
// Every prediction is instrumented: a consumed timestamp >= asof or a
// recommended item released after asof counts as a violation.
//
//   timeline     test instances are masked and never consumed
//   prequential  every event is a test instance, then consumed
//   sliding      the model is refit from scratch at each window boundary on
//                all earlier non-test events; tests in the window query it frozen
using ModelFactory = std::function<std::unique_ptr<Recommender>()>;

TimelineReport RunTimeline(const Dataset& d, std::span<const InteractionIndex> masked_tests,
                           const ModelFactory& make_model, const TimelineOptions& options);

TimelineReport RunTimeline(const Dataset& d, std::span<const InteractionIndex> masked_tests, const ModelSpec& spec,
                           std::uint64_t seed, const TimelineOptions& options);

}  // namespace leakproof
