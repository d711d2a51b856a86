#pragma once

#include <vector>

#include "leakproof/model.hpp"

namespace leakproof {

/// Scores every item by its interaction count in the consumed data.
class PopularityModel final : public Recommender {
 public:
  std::string_view kind() const override { return "popularity"; }
  nlohmann::json Params() const override { return nlohmann::json::object(); }

  std::size_t count(ItemId i) const { return i.value < counts_.size() ? counts_[i.value] : 0; }

 protected:
  void Reset() override { counts_.clear(); }
  void Train(std::span<const Interaction> fresh, bool initial) override;
  bool Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const override;

 private:
  std::vector<std::size_t> counts_;
};

}  // namespace leakproof
