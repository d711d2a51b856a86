#include "leakproof/item_knn.hpp"

#include <algorithm>
#include <cmath>

namespace leakproof {

void ItemKnnModel::Reset() {
  user_items_.clear();
  item_users_.clear();
  co_counts_.clear();
}

void ItemKnnModel::Train(std::span<const Interaction> fresh, bool) {
  for (const auto& x : fresh) {
    if (x.user.value >= user_items_.size()) user_items_.resize(x.user.value + 1);
    if (x.item.value >= item_users_.size()) {
      item_users_.resize(x.item.value + 1, 0);
      co_counts_.resize(x.item.value + 1);
    }
    auto& items = user_items_[x.user.value];
    auto pos = std::lower_bound(items.begin(), items.end(), x.item);
    if (pos != items.end() && *pos == x.item) continue;  // binary vectors: repeats add nothing
    for (auto other : items) {
      ++co_counts_[x.item.value][other.value];
      ++co_counts_[other.value][x.item.value];
    }
    items.insert(pos, x.item);
    ++item_users_[x.item.value];
  }
}

double ItemKnnModel::Similarity(ItemId a, ItemId b) const {
  if (a.value >= item_users_.size() || b.value >= item_users_.size()) return 0.0;
  const double na = item_users_[a.value];
  const double nb = item_users_[b.value];
  if (na == 0 || nb == 0) return 0.0;
  if (a == b) return 1.0;
  const auto& row = co_counts_[a.value];
  const auto it = row.find(b.value);
  if (it == row.end()) return 0.0;
  return it->second / std::sqrt(na * nb);
}

std::vector<std::pair<ItemId, double>> ItemKnnModel::Neighbors(ItemId item) const {
  std::vector<std::pair<ItemId, double>> out;
  if (item.value >= co_counts_.size()) return out;
  const double ni = item_users_[item.value];
  out.reserve(co_counts_[item.value].size());
  for (const auto& [other, count] : co_counts_[item.value]) {
    out.emplace_back(ItemId{other}, count / std::sqrt(ni * item_users_[other]));
  }
  const auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t keep = std::min(neighborhood_size_, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), better);
  out.resize(keep);
  return out;
}

bool ItemKnnModel::Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const {
  const auto history = History(u);
  if (history.empty()) {
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const auto i = candidates[k].value;
      out[k] = i < item_users_.size() ? item_users_[i] : 0.0;
    }
    return true;
  }
  std::vector<double> accumulated(item_users_.size(), 0.0);
  for (auto j : history) {
    for (const auto& [neighbor, sim] : Neighbors(j)) accumulated[neighbor.value] += sim;
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto i = candidates[k].value;
    out[k] = i < accumulated.size() ? accumulated[i] : 0.0;
  }
  return false;
}

}  // namespace leakproof
