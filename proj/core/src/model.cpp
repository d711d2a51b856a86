#include "leakproof/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace leakproof {

void Recommender::Fit(std::span<const Interaction> train) {
  consumed_.clear();
  seen_.clear();
  in_catalog_.clear();
  catalog_items_.clear();
  max_consumed_.reset();
  Reset();
  Absorb(train);
  Train(train, true);
}

void Recommender::Update(std::span<const Interaction> fresh) {
  if (!SupportsUpdate()) throw UsageError(std::string(kind()) + " does not support incremental update");
  if (fresh.empty()) return;
  Absorb(fresh);
  Train(fresh, false);
}

void Recommender::Absorb(std::span<const Interaction> fresh) {
  consumed_.insert(consumed_.end(), fresh.begin(), fresh.end());
  for (const auto& x : fresh) {
    if (x.user.value >= seen_.size()) seen_.resize(x.user.value + 1);
    auto& items = seen_[x.user.value];
    auto pos = std::lower_bound(items.begin(), items.end(), x.item);
    if (pos == items.end() || *pos != x.item) items.insert(pos, x.item);
    if (x.item.value >= in_catalog_.size()) in_catalog_.resize(x.item.value + 1, false);
    if (!in_catalog_[x.item.value]) {
      in_catalog_[x.item.value] = true;
      catalog_items_.push_back(x.item);
    }
    max_consumed_ = max_consumed_ ? std::max(*max_consumed_, x.timestamp) : x.timestamp;
  }
}

void Recommender::Restore(std::span<const Interaction> log, std::istream& state) {
  consumed_.clear();
  seen_.clear();
  in_catalog_.clear();
  catalog_items_.clear();
  max_consumed_.reset();
  Reset();
  Absorb(log);
  ReadState(state);
}

std::vector<ItemId> Recommender::Catalog() const {
  std::vector<ItemId> out = catalog_items_;
  std::sort(out.begin(), out.end());
  return out;
}

std::span<const ItemId> Recommender::History(UserId u) const {
  if (u.value >= seen_.size()) return {};
  return seen_[u.value];
}

bool Recommender::HasSeen(UserId u, ItemId i) const {
  const auto h = History(u);
  return std::binary_search(h.begin(), h.end(), i);
}

void Recommender::WriteState(std::ostream&) const {}

void Recommender::ReadState(std::istream&) { Train(consumed_, true); }

RecommendationList Recommender::Recommend(const Query& q) const {
  RecommendationList list;
  list.user = q.user;
  list.asof = q.asof;
  if (q.n == 0) return list;

  std::vector<ItemId> exclusions(q.exclusions.begin(), q.exclusions.end());
  std::sort(exclusions.begin(), exclusions.end());
  const auto history = History(q.user);

  std::vector<ItemId> candidates;
  candidates.reserve(catalog_items_.size());
  for (auto item : catalog_items_) {
    if (q.candidates != nullptr && !q.candidates->allows(item)) continue;
    if (q.exclude_seen && std::binary_search(history.begin(), history.end(), item)) continue;
    if (std::binary_search(exclusions.begin(), exclusions.end(), item)) continue;
    candidates.push_back(item);
  }
  if (candidates.empty()) return list;

  std::vector<double> scores(candidates.size(), 0.0);
  list.fallback = Score(q.user, candidates, scores);

  std::vector<std::pair<double, ItemId>> scored;
  scored.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (std::isnan(scores[k])) continue;
    scored.emplace_back(scores[k], candidates[k]);
  }
  RankTopN(scored, q.n, list);
  return list;
}

void RankTopN(std::vector<std::pair<double, ItemId>>& scored, std::size_t n, RecommendationList& out) {
  const auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  const std::size_t keep = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  out.items.clear();
  out.scores.clear();
  for (std::size_t k = 0; k < keep; ++k) {
    out.scores.push_back(scored[k].first);
    out.items.push_back(scored[k].second);
  }
}

}  // namespace leakproof
