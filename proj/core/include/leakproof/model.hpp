#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakproof/types.hpp"

namespace leakproof {

/// Ranked top-N list for one query. Scores are non-increasing; equal scores
/// are ordered by ascending item id.
struct RecommendationList {
  UserId user;
  std::vector<ItemId> items;
  std::vector<double> scores;
  Timestamp asof = 0;
  /// Set when the model could not personalise (ItemKNN with empty history).
  bool fallback = false;
};

/// Allow-list over item ids; ids past the end are not allowed.
class ItemMask {
 public:
  ItemMask() = default;
  explicit ItemMask(std::size_t n_items, bool value = false) : bits_(n_items, value ? 1 : 0) {}

  void Allow(ItemId i) {
    if (i.value >= bits_.size()) bits_.resize(i.value + 1, 0);
    bits_[i.value] = 1;
  }
  bool allows(ItemId i) const { return i.value < bits_.size() && bits_[i.value] != 0; }
  std::size_t size() const { return bits_.size(); }

 private:
  std::vector<std::uint8_t> bits_;
};

struct Query {
  UserId user;
  std::size_t n = 20;
  Timestamp asof = 0;
  /// nullptr means every catalog item is a candidate.
  const ItemMask* candidates = nullptr;
  /// Drop items the user already consumed.
  bool exclude_seen = true;
  std::span<const ItemId> exclusions;
};

// Pluggable recommender contract.
//
// Fit() replaces all state with a batch of interactions; Update() consumes
// further interactions incrementally. The base class owns the bookkeeping
// shared by every model: the catalog (items seen so far, growing
// monotonically), per-user consumed item sets, the consumed interaction log
// and the latest consumed timestamp used by the timeline instrumentation.
// Recommend() ranks candidate ∩ catalog minus exclusions and never returns
// anything else.
class Recommender {
 public:
  virtual ~Recommender() = default;

  virtual std::string_view kind() const = 0;
  virtual bool SupportsUpdate() const { return true; }

  void Fit(std::span<const Interaction> train);
  void Update(std::span<const Interaction> fresh);

  RecommendationList Recommend(const Query& q) const;

  bool InCatalog(ItemId i) const { return i.value < in_catalog_.size() && in_catalog_[i.value]; }
  /// Known items in ascending id order.
  std::vector<ItemId> Catalog() const;
  std::size_t catalog_size() const { return catalog_items_.size(); }

  /// Sorted distinct items consumed by `u` (empty for unknown users).
  std::span<const ItemId> History(UserId u) const;
  bool KnowsUser(UserId u) const { return u.value < seen_.size() && !seen_[u.value].empty(); }

  std::size_t consumed_count() const { return consumed_.size(); }
  const std::vector<Interaction>& consumed() const { return consumed_; }
  std::optional<Timestamp> max_consumed_timestamp() const { return max_consumed_; }

  /// Hyperparameters, for checkpoint headers and manifests.
  virtual nlohmann::json Params() const = 0;

  /// Model-specific state beyond the consumed log (factors, RNG...).
  virtual void WriteState(std::ostream& out) const;
  /// Restores a model from its consumed log and the stream written by WriteState.
  void Restore(std::span<const Interaction> log, std::istream& state);

 protected:
  /// Drops model-specific state before a Fit().
  virtual void Reset() = 0;
  /// Learns from `fresh`, already appended to the bookkeeping. `initial` is
  /// true for the Fit() batch.
  virtual void Train(std::span<const Interaction> fresh, bool initial) = 0;
  /// Fills `out` with one score per candidate. Returns true if the scores are
  /// a non-personalised fallback.
  virtual bool Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const = 0;

  const std::vector<ItemId>& catalog_items() const { return catalog_items_; }
  bool HasSeen(UserId u, ItemId i) const;

  /// Reads what WriteState wrote; bookkeeping is already restored. The default
  /// retrains from the consumed log.
  virtual void ReadState(std::istream& in);

 private:
  void Absorb(std::span<const Interaction> fresh);

  std::vector<Interaction> consumed_;
  std::vector<std::vector<ItemId>> seen_;
  std::vector<bool> in_catalog_;
  std::vector<ItemId> catalog_items_;
  std::optional<Timestamp> max_consumed_;
};

/// Orders (score desc, id asc) and keeps the first n.
void RankTopN(std::vector<std::pair<double, ItemId>>& scored, std::size_t n, RecommendationList& out);

}  // namespace leakproof
