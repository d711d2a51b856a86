#include "leakproof/timeline.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

namespace leakproof {

std::string_view ToString(TimelineMode mode) {
  switch (mode) {
    case TimelineMode::kTimeline:
      return "timeline";
    case TimelineMode::kPrequential:
      return "prequential";
    case TimelineMode::kSliding:
      return "sliding";
  }
  return "unknown";
}

TimelineMode ParseTimelineMode(std::string_view name) {
  for (auto m : {TimelineMode::kTimeline, TimelineMode::kPrequential, TimelineMode::kSliding}) {
    if (ToString(m) == name) return m;
  }
  throw UsageError("unknown mode '" + std::string(name) + "' (expected timeline, prequential or sliding)");
}

TimelineReport RunTimeline(const Dataset& d, std::span<const InteractionIndex> masked_tests,
                           const ModelFactory& make_model, const TimelineOptions& options) {
  const auto mode = options.mode;
  if (options.topn == 0) throw UsageError("topn must be positive");
  if (options.batch_size == 0) throw UsageError("batch size must be positive");
  if (mode == TimelineMode::kSliding && options.window <= 0) throw UsageError("sliding window must be positive");

  std::vector<bool> is_test(d.size(), mode == TimelineMode::kPrequential);
  if (mode != TimelineMode::kPrequential) {
    for (auto t : masked_tests) {
      if (t >= d.size()) throw UsageError("test index " + std::to_string(t) + " out of range");
      is_test[t] = true;
    }
  }

  std::unique_ptr<Recommender> model;
  if (mode != TimelineMode::kSliding) {
    model = make_model();
    if (!model->SupportsUpdate()) {
      throw UsageError(std::string(model->kind()) + " is not incremental; " + std::string(ToString(mode)) +
                       " mode needs update()");
    }
    model->Fit({});
  }

  std::vector<std::uint32_t> by_release(d.n_items());
  std::iota(by_release.begin(), by_release.end(), 0u);
  std::stable_sort(by_release.begin(), by_release.end(), [&](std::uint32_t a, std::uint32_t b) {
    return d.release_time(ItemId{a}) < d.release_time(ItemId{b});
  });
  std::size_t released_upto = 0;
  ItemMask released(d.n_items());

  const Timestamp origin = options.origin.value_or(d.t_start() + options.window);
  std::optional<Timestamp> boundary;
  std::vector<Interaction> train_events;  // sliding: non-test events seen so far
  std::size_t train_fed = 0;

  TimelineReport report;
  report.mode = mode;
  std::vector<Interaction> buffer;
  double hr_sum = 0.0;
  double ndcg_sum = 0.0;

  const auto& rows = d.interactions();
  std::size_t i = 0;
  while (i < rows.size()) {
    const Timestamp now = rows[i].timestamp;
    std::size_t end = i;
    while (end < rows.size() && rows[end].timestamp == now) ++end;

    while (released_upto < by_release.size() && d.release_time(ItemId{by_release[released_upto]}) <= now) {
      released.Allow(ItemId{by_release[released_upto++]});
    }

    if (mode == TimelineMode::kSliding && now >= origin) {
      const Timestamp start = origin + (now - origin) / options.window * options.window;
      if (boundary != start) {
        boundary = start;
        while (train_fed < train_events.size() && train_events[train_fed].timestamp < start) ++train_fed;
        model = make_model();
        model->Fit(std::span(train_events).first(train_fed));
        ++report.refits;
      }
    }

    for (std::size_t k = i; k < end; ++k) {
      if (!is_test[k]) continue;
      if (mode == TimelineMode::kSliding && !boundary) {
        ++report.skipped;
        continue;
      }
      const auto& x = rows[k];
      Query q;
      q.user = x.user;
      q.n = options.topn;
      q.asof = now;
      q.candidates = &released;
      q.exclude_seen = options.exclude_seen;

      TimelineRow row;
      row.index = static_cast<InteractionIndex>(k);
      row.user = x.user;
      row.target = x.item;
      row.asof = now;
      row.list = model->Recommend(q);
      row.hit = HitAtN(row.list, x.item);
      row.ndcg = NdcgAtN(row.list, x.item);
      row.consumed = model->consumed_count();
      row.max_consumed = model->max_consumed_timestamp();
      for (auto item : row.list.items) {
        if (d.release_time(item) > now) ++row.future_items;
      }
      row.violation = (row.max_consumed && *row.max_consumed >= now) || row.future_items > 0;
      report.violations += row.violation ? 1 : 0;
      hr_sum += row.hit;
      ndcg_sum += row.ndcg;
      report.rows.push_back(std::move(row));
    }

    for (std::size_t k = i; k < end; ++k) {
      const bool feed = mode == TimelineMode::kPrequential || !is_test[k];
      if (!feed) continue;
      if (mode == TimelineMode::kSliding) {
        train_events.push_back(rows[k]);
        continue;
      }
      buffer.push_back(rows[k]);
      if (buffer.size() >= options.batch_size) {
        model->Update(buffer);
        buffer.clear();
      }
    }
    i = end;
  }

  const auto n = report.rows.size();
  report.accuracy = {n ? hr_sum / static_cast<double>(n) : 0.0, n ? ndcg_sum / static_cast<double>(n) : 0.0,
                     options.topn, n};
  if (report.violations > 0) spdlog::error("timeline run recorded {} leakage violation(s)", report.violations);
  return report;
}

TimelineReport RunTimeline(const Dataset& d, std::span<const InteractionIndex> masked_tests, const ModelSpec& spec,
                           std::uint64_t seed, const TimelineOptions& options) {
  return RunTimeline(d, masked_tests, [&] { return MakeModel(spec, seed); }, options);
}

}  // namespace leakproof
