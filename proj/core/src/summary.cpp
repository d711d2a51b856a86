#include "leakproof/summary.hpp"

#include <algorithm>
#include <map>

namespace leakproof {

SweepSummary Summarise(const SweepReport& report) { return {report.model, report.windows}; }

SummaryTables Summarize(std::span<const SweepSummary> sweeps) {
  if (sweeps.empty()) throw UsageError("summarize needs at least one sweep report");
  SummaryTables out;
  std::map<int, std::map<std::string, double>> hr_by_window;
  for (const auto& sweep : sweeps) {
    const auto ref = std::find_if(sweep.windows.begin(), sweep.windows.end(),
                                  [](const WindowSummary& w) { return w.future_windows == 0; });
    if (ref == sweep.windows.end()) {
      throw UsageError("sweep for '" + sweep.model + "' has no future_windows=0 reference config");
    }
    ChangeRange range;
    range.model = sweep.model;
    for (const auto& w : sweep.windows) {
      hr_by_window[w.future_windows][sweep.model] = w.mean_hr;
      if (w.future_windows == 0) continue;
      const double hr = PercentChange(ref->mean_hr, w.mean_hr);
      const double ndcg = PercentChange(ref->mean_ndcg, w.mean_ndcg);
      if (range.empty) {
        range.min_hr = range.max_hr = hr;
        range.min_ndcg = range.max_ndcg = ndcg;
        range.empty = false;
      } else {
        range.min_hr = std::min(range.min_hr, hr);
        range.max_hr = std::max(range.max_hr, hr);
        range.min_ndcg = std::min(range.min_ndcg, ndcg);
        range.max_ndcg = std::max(range.max_ndcg, ndcg);
      }
    }
    out.changes.push_back(range);
  }
  for (const auto& [windows, scores] : hr_by_window) out.ranks.push_back({windows, RankModels(scores)});
  return out;
}

}  // namespace leakproof
