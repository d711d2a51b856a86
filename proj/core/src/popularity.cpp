#include "leakproof/popularity.hpp"

namespace leakproof {

void PopularityModel::Train(std::span<const Interaction> fresh, bool) {
  for (const auto& x : fresh) {
    if (x.item.value >= counts_.size()) counts_.resize(x.item.value + 1, 0);
    ++counts_[x.item.value];
  }
}

bool PopularityModel::Score(UserId, std::span<const ItemId> candidates, std::span<double> out) const {
  for (std::size_t k = 0; k < candidates.size(); ++k) out[k] = static_cast<double>(count(candidates[k]));
  return false;
}

}  // namespace leakproof
