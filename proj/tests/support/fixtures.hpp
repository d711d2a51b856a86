#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "leakproof/corpus.hpp"
#include "leakproof/model.hpp"

namespace leakproof::testing {

using Row = std::tuple<std::string, std::string, Timestamp>;

inline Dataset MakeDataset(std::initializer_list<Row> rows) {
  std::vector<RawInteraction> raw;
  for (const auto& [u, i, t] : rows) raw.push_back({u, i, t});
  return Dataset::FromRaw(raw);
}

inline std::vector<Interaction> Rows(const Dataset& d, std::span<const InteractionIndex> idx) {
  std::vector<Interaction> out;
  for (auto i : idx) out.push_back(d[i]);
  return out;
}

inline std::vector<Interaction> AllRows(const Dataset& d) { return d.interactions(); }

inline ItemId Item(const Dataset& d, const std::string& name) { return *d.FindItem(name); }
inline UserId User(const Dataset& d, const std::string& name) { return *d.FindUser(name); }

inline std::vector<std::string> ItemNames(const Dataset& d, const RecommendationList& list) {
  std::vector<std::string> out;
  for (auto i : list.items) out.push_back(d.item_name(i));
  return out;
}

// Three users on a 100-second window grid. A and B share s1, s2; B and C
// share c1, c2; every item C touches is first interacted with after A's last
// interaction (x at t=150, the only test instance of window 1).
inline constexpr Timestamp kThreeUserWindow = 100;

inline Dataset ThreeUserDataset() {
  return MakeDataset({
      {"A", "s1", 0},
      {"A", "s2", 20},
      {"B", "s1", 30},
      {"B", "s2", 40},
      {"B", "p", 45},
      {"A", "x", 150},
      {"B", "c1", 210},
      {"B", "c2", 220},
      {"C", "c1", 230},
      {"C", "c2", 240},
      {"C", "c3", 250},
  });
}

}  // namespace leakproof::testing
