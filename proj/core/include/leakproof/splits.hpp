#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakproof/corpus.hpp"

namespace leakproof {

enum class SplitStrategy { kRandomByRatio, kRandomByUser, kLeaveOneOut, kByTimepoint };

std::string_view ToString(SplitStrategy s);
/// Accepts "random-ratio", "random-user", "leave-one-out", "timepoint".
SplitStrategy ParseSplitStrategy(std::string_view name);

struct SplitParams {
  double ratio = 0.2;           // random-ratio: interaction fraction; random-user: user fraction
  Timestamp timepoint = 0;      // timepoint
  std::uint64_t seed = 0;       // random strategies
  bool with_validation = false; // leave-one-out
};

/// Partition of a Dataset's interaction indices. Index lists are ascending
/// and pairwise disjoint.
struct Split {
  SplitStrategy strategy = SplitStrategy::kLeaveOneOut;
  SplitParams params;
  std::vector<InteractionIndex> train;
  std::vector<InteractionIndex> validation;
  std::vector<InteractionIndex> test;
  /// Leave-one-out only: users without enough interactions to be tested.
  std::vector<UserId> excluded_users;
};

Split SplitRandomByRatio(const Dataset& d, double ratio, std::uint64_t seed);
Split SplitRandomByUser(const Dataset& d, double user_ratio, std::uint64_t seed);

/// Each user's last interaction (latest timestamp, later input order on ties)
/// is test; the second-last is validation when requested. Users with fewer
/// than 2 (3 with validation) interactions stay entirely in train and are
/// listed in excluded_users.
Split SplitLeaveOneOut(const Dataset& d, bool with_validation);

/// Interactions at or after `timepoint` are test. Requires t_start < timepoint <= t_end.
Split SplitByTimepoint(const Dataset& d, Timestamp timepoint);

Split MakeSplit(const Dataset& d, SplitStrategy strategy, const SplitParams& params);

struct TestLeakage {
  InteractionIndex test = 0;
  std::size_t future_train_count = 0;  ///< train interactions strictly later than the test
  std::size_t future_item_count = 0;   ///< train-catalog items released strictly later
};

struct LeakageAudit {
  std::vector<TestLeakage> per_test;
  std::size_t total_future_train = 0;
  std::size_t total_future_items = 0;
};

LeakageAudit AuditLeakage(const Dataset& d, const Split& s);

/// Writes train.idx, validation.idx, test.idx (one index per line) and
/// split.json (strategy, params, sizes, audit totals) into `dir`.
void WriteSplit(const Split& s, const LeakageAudit& audit, const std::filesystem::path& dir);

/// Reads a split written by WriteSplit.
Split ReadSplit(const std::filesystem::path& dir);

nlohmann::json SplitManifest(const Split& s, const LeakageAudit& audit);

}  // namespace leakproof
