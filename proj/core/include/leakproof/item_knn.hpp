#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "leakproof/model.hpp"

namespace leakproof {

// Item-based nearest neighbours over binary user vectors.
//
//   sim(i, j) = |U_i ∩ U_j| / sqrt(|U_i| * |U_j|)
//   score(u, i) = sum over j in history(u) with i among the top-k neighbours of j of sim(i, j)
//
// Co-occurrence counts are maintained incrementally, so Update() costs
// O(|history(u)|) per new (user, item) pair and neighbour lists are derived at
// query time. A user without history gets the popularity order (distinct-user
// counts) and the list is flagged as a fallback.
class ItemKnnModel final : public Recommender {
 public:
  explicit ItemKnnModel(std::size_t neighborhood_size = 50) : neighborhood_size_(neighborhood_size) {}

  std::string_view kind() const override { return "itemknn"; }
  nlohmann::json Params() const override { return {{"neighborhood_size", neighborhood_size_}}; }

  double Similarity(ItemId a, ItemId b) const;
  /// Top-k neighbours of `item`, by similarity descending then id ascending.
  std::vector<std::pair<ItemId, double>> Neighbors(ItemId item) const;

  std::size_t neighborhood_size() const { return neighborhood_size_; }

 protected:
  void Reset() override;
  void Train(std::span<const Interaction> fresh, bool initial) override;
  bool Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const override;

 private:
  std::size_t neighborhood_size_;
  std::vector<std::vector<ItemId>> user_items_;
  std::vector<std::uint32_t> item_users_;
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> co_counts_;
};

}  // namespace leakproof
