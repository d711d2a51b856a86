#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "leakproof/model.hpp"

namespace leakproof {

/// 1 iff target is in the list.
int HitAtN(const RecommendationList& list, ItemId target);

/// 1 / log2(rank + 1) for the 1-indexed rank of target, 0 if absent. With a
/// single relevant item the ideal DCG is 1, so this is already normalised.
double NdcgAtN(const RecommendationList& list, ItemId target);

/// Number of listed items released strictly after `asof`. release_time is
/// indexed by item id; an item without an entry is an error.
std::size_t CountFutureItems(const RecommendationList& list, std::span<const Timestamp> release_time, Timestamp asof);

/// |A ∩ B| / |A ∪ B| over the item sets; 1.0 when both are empty.
double Jaccard(std::span<const ItemId> a, std::span<const ItemId> b);
double Jaccard(const RecommendationList& a, const RecommendationList& b);

struct AccuracyRecord {
  double hr = 0.0;
  double ndcg = 0.0;
  std::size_t n = 20;
  std::size_t instances = 0;
};

enum class SimilarityKind { kIntrinsic, kExtrinsic };

/// Per-test-instance mean Jaccard values.
struct SimilarityDistribution {
  SimilarityKind kind = SimilarityKind::kIntrinsic;
  std::size_t pair_count = 0;  ///< pairs averaged per instance: R(R-1)/2 or R*R
  std::vector<double> values;

  double Mean() const;
};

/// runs[t] holds the R lists produced for test instance t by R seeds.
using RunsPerInstance = std::vector<std::vector<RecommendationList>>;

/// Mean Jaccard over the R(R-1)/2 unordered pairs of each instance.
SimilarityDistribution IntrinsicSimilarity(const RunsPerInstance& runs, std::size_t expected_runs = 7);

/// Mean Jaccard over the R*R cross pairs of each instance.
SimilarityDistribution ExtrinsicSimilarity(const RunsPerInstance& reference, const RunsPerInstance& other,
                                           std::size_t expected_runs = 7);

/// (value - reference) / reference * 100. reference must be > 0.
double PercentChange(double reference, double value);

struct ModelRank {
  std::string model;
  double score = 0.0;
  int rank = 0;
};

/// Competition ranking by score descending: tied models share the better
/// rank. Output is ordered by (rank, model name).
std::vector<ModelRank> RankModels(const std::map<std::string, double>& scores);

}  // namespace leakproof
