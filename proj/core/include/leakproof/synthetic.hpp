#pragma once

#include <cstdint>
#include <vector>

#include "leakproof/corpus.hpp"

namespace leakproof {

// Generator for timestamped interaction logs with the structure that makes
// leakage visible: items are released throughout the span, users are active
// for a limited period, popularity decays with item age, and users prefer
// items from one taste cluster.
struct SyntheticConfig {
  std::uint32_t n_users = 1000;
  std::uint32_t n_items = 500;
  std::uint32_t interactions_per_user = 10;  ///< mean; every user gets at least min_per_user
  std::uint32_t min_per_user = 3;
  Timestamp t_start = 1'000'000'000;
  Timestamp duration = 5 * kSecondsPerYear;
  /// Fraction of the catalog available at t_start; the rest is released uniformly over the span.
  double initial_catalog = 0.1;
  /// Mean user active period as a fraction of the span.
  double mean_active_fraction = 0.25;
  /// Mean item age (as a fraction of the span) at the time of an interaction.
  double recency = 0.1;
  std::uint32_t clusters = 8;
  double cluster_affinity = 0.8;  ///< probability an interaction stays in the user's cluster
  double quality_sigma = 1.0;     ///< log-normal spread of item appeal
  std::uint64_t seed = 0;
};

/// Rows are unsorted, with decimal user and item identifiers. No user repeats an item.
std::vector<RawInteraction> GenerateSynthetic(const SyntheticConfig& cfg);

inline Dataset SyntheticDataset(const SyntheticConfig& cfg) { return Dataset::FromRaw(GenerateSynthetic(cfg)); }

}  // namespace leakproof
