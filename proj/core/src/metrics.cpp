#include "leakproof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leakproof {
namespace {

void CheckRunCounts(const RunsPerInstance& runs, std::size_t expected, const char* side) {
  for (std::size_t t = 0; t < runs.size(); ++t) {
    if (runs[t].size() != expected) {
      throw UsageError(std::string(side) + " instance " + std::to_string(t) + " has " +
                       std::to_string(runs[t].size()) + " runs, expected " + std::to_string(expected));
    }
  }
}

std::vector<ItemId> SortedUnique(std::span<const ItemId> items) {
  std::vector<ItemId> out(items.begin(), items.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

int HitAtN(const RecommendationList& list, ItemId target) {
  return std::find(list.items.begin(), list.items.end(), target) != list.items.end() ? 1 : 0;
}

double NdcgAtN(const RecommendationList& list, ItemId target) {
  const auto it = std::find(list.items.begin(), list.items.end(), target);
  if (it == list.items.end()) return 0.0;
  const auto rank = static_cast<double>(it - list.items.begin()) + 1.0;
  return 1.0 / std::log2(rank + 1.0);
}

std::size_t CountFutureItems(const RecommendationList& list, std::span<const Timestamp> release_time, Timestamp asof) {
  std::size_t count = 0;
  for (auto item : list.items) {
    if (item.value >= release_time.size()) {
      throw UsageError("no release time for item " + std::to_string(item.value));
    }
    if (release_time[item.value] > asof) ++count;
  }
  return count;
}

double Jaccard(std::span<const ItemId> a, std::span<const ItemId> b) {
  const auto sa = SortedUnique(a);
  const auto sb = SortedUnique(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::vector<ItemId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const double inter = static_cast<double>(common.size());
  return inter / (static_cast<double>(sa.size() + sb.size()) - inter);
}

double Jaccard(const RecommendationList& a, const RecommendationList& b) { return Jaccard(a.items, b.items); }

double SimilarityDistribution::Mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

SimilarityDistribution IntrinsicSimilarity(const RunsPerInstance& runs, std::size_t expected_runs) {
  if (expected_runs < 2) throw UsageError("intrinsic similarity needs at least 2 runs");
  CheckRunCounts(runs, expected_runs, "intrinsic");
  SimilarityDistribution dist;
  dist.kind = SimilarityKind::kIntrinsic;
  dist.pair_count = expected_runs * (expected_runs - 1) / 2;
  dist.values.reserve(runs.size());
  for (const auto& lists : runs) {
    double sum = 0.0;
    for (std::size_t a = 0; a < lists.size(); ++a) {
      for (std::size_t b = a + 1; b < lists.size(); ++b) sum += Jaccard(lists[a], lists[b]);
    }
    dist.values.push_back(sum / static_cast<double>(dist.pair_count));
  }
  return dist;
}

SimilarityDistribution ExtrinsicSimilarity(const RunsPerInstance& reference, const RunsPerInstance& other,
                                           std::size_t expected_runs) {
  if (expected_runs < 1) throw UsageError("extrinsic similarity needs at least 1 run");
  if (reference.size() != other.size()) {
    throw UsageError("extrinsic similarity over mismatched test sets (" + std::to_string(reference.size()) + " vs " +
                     std::to_string(other.size()) + " instances)");
  }
  CheckRunCounts(reference, expected_runs, "reference");
  CheckRunCounts(other, expected_runs, "compared");
  SimilarityDistribution dist;
  dist.kind = SimilarityKind::kExtrinsic;
  dist.pair_count = expected_runs * expected_runs;
  dist.values.reserve(reference.size());
  for (std::size_t t = 0; t < reference.size(); ++t) {
    double sum = 0.0;
    for (const auto& a : reference[t]) {
      for (const auto& b : other[t]) sum += Jaccard(a, b);
    }
    dist.values.push_back(sum / static_cast<double>(dist.pair_count));
  }
  return dist;
}

double PercentChange(double reference, double value) {
  if (!(reference > 0.0)) throw UsageError("percent change needs a positive reference value");
  return (value - reference) / reference * 100.0;
}

std::vector<ModelRank> RankModels(const std::map<std::string, double>& scores) {
  std::vector<ModelRank> out;
  out.reserve(scores.size());
  for (const auto& [model, score] : scores) out.push_back({model, score, 0});
  std::stable_sort(out.begin(), out.end(), [](const ModelRank& a, const ModelRank& b) { return a.score > b.score; });
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].rank = (k > 0 && out[k].score == out[k - 1].score) ? out[k - 1].rank : static_cast<int>(k) + 1;
  }
  return out;
}

}  // namespace leakproof
