#include "leakproof/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "leakproof/rng.hpp"

namespace leakproof {
namespace {

double Exponential(Rng& rng, double mean) { return -std::log1p(-rng.UniformReal()) * mean; }

struct Catalog {
  std::vector<Timestamp> release;              // by item
  std::vector<double> quality;                 // by item
  std::vector<std::vector<std::uint32_t>> by_cluster;  // items sorted by release
  std::vector<std::uint32_t> all;              // items sorted by release
};

Catalog MakeCatalog(const SyntheticConfig& cfg, Rng& rng) {
  Catalog c;
  c.release.resize(cfg.n_items);
  c.quality.resize(cfg.n_items);
  c.by_cluster.resize(cfg.clusters);
  const auto initial = static_cast<std::uint32_t>(std::llround(cfg.initial_catalog * cfg.n_items));
  for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
    c.release[i] = i < initial ? cfg.t_start : cfg.t_start + rng.UniformInt(0, cfg.duration - 1);
    c.quality[i] = std::exp(rng.Normal(0.0, cfg.quality_sigma));
    c.by_cluster[rng.UniformIndex(cfg.clusters)].push_back(i);
    c.all.push_back(i);
  }
  const auto by_release = [&](std::uint32_t a, std::uint32_t b) {
    return c.release[a] != c.release[b] ? c.release[a] < c.release[b] : a < b;
  };
  for (auto& list : c.by_cluster) std::sort(list.begin(), list.end(), by_release);
  std::sort(c.all.begin(), c.all.end(), by_release);
  return c;
}

// Picks an item released at or before t, near a recency-biased target age,
// weighted by appeal. Returns n_items when nothing is released yet.
std::uint32_t Draw(const SyntheticConfig& cfg, const Catalog& c, const std::vector<std::uint32_t>& pool, Timestamp t,
                   Rng& rng) {
  const auto released = static_cast<std::size_t>(
      std::upper_bound(pool.begin(), pool.end(), t, [&](Timestamp v, std::uint32_t i) { return v < c.release[i]; }) -
      pool.begin());
  if (released == 0) return cfg.n_items;
  const auto age = static_cast<Timestamp>(Exponential(rng, cfg.recency * static_cast<double>(cfg.duration)));
  const Timestamp target = t - age;
  auto j = static_cast<std::size_t>(std::upper_bound(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(released),
                                                     target,
                                                     [&](Timestamp v, std::uint32_t i) { return v < c.release[i]; }) -
                                    pool.begin());
  j = j == 0 ? 0 : j - 1;
  constexpr std::size_t kHalfWidth = 8;
  const std::size_t lo = j > kHalfWidth ? j - kHalfWidth : 0;
  const std::size_t hi = std::min(released, j + kHalfWidth + 1);
  double total = 0.0;
  for (std::size_t k = lo; k < hi; ++k) total += c.quality[pool[k]];
  double pick = rng.UniformReal() * total;
  for (std::size_t k = lo; k < hi; ++k) {
    pick -= c.quality[pool[k]];
    if (pick < 0.0) return pool[k];
  }
  return pool[hi - 1];
}

}  // namespace

std::vector<RawInteraction> GenerateSynthetic(const SyntheticConfig& cfg) {
  if (cfg.n_users == 0 || cfg.n_items == 0) throw UsageError("synthetic data needs users and items");
  if (cfg.duration <= 0) throw UsageError("synthetic duration must be positive");
  if (cfg.clusters == 0) throw UsageError("synthetic data needs at least one cluster");
  if (cfg.interactions_per_user < cfg.min_per_user) {
    throw UsageError("interactions_per_user must be at least min_per_user");
  }
  Rng rng(cfg.seed);
  const Catalog catalog = MakeCatalog(cfg, rng);
  const Timestamp t_end = cfg.t_start + cfg.duration - 1;

  std::vector<RawInteraction> rows;
  rows.reserve(static_cast<std::size_t>(cfg.n_users) * cfg.interactions_per_user);
  std::unordered_set<std::uint32_t> seen;
  std::vector<Timestamp> times;
  for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
    const std::uint32_t cluster = static_cast<std::uint32_t>(rng.UniformIndex(cfg.clusters));
    const Timestamp arrival = cfg.t_start + rng.UniformInt(0, cfg.duration - 1);
    const auto active = std::max<Timestamp>(
        kSecondsPerDay,
        static_cast<Timestamp>(Exponential(rng, cfg.mean_active_fraction * static_cast<double>(cfg.duration))));
    const Timestamp leave = std::min(t_end, arrival + active);
    const auto extra = static_cast<std::uint32_t>(Exponential(rng, cfg.interactions_per_user - cfg.min_per_user));
    const std::uint32_t count = cfg.min_per_user + extra;

    times.clear();
    for (std::uint32_t k = 0; k < count; ++k) times.push_back(rng.UniformInt(arrival, leave));
    std::sort(times.begin(), times.end());
    seen.clear();
    for (const Timestamp t : times) {
      for (int attempt = 0; attempt < 10; ++attempt) {
        const bool stay = rng.UniformReal() < cfg.cluster_affinity;
        const auto& pool = stay ? catalog.by_cluster[cluster] : catalog.all;
        std::uint32_t item = Draw(cfg, catalog, pool, t, rng);
        if (item == cfg.n_items && stay) item = Draw(cfg, catalog, catalog.all, t, rng);
        if (item == cfg.n_items) break;
        if (!seen.insert(item).second) continue;
        rows.push_back({std::to_string(u), std::to_string(item), t});
        break;
      }
    }
  }
  return rows;
}

}  // namespace leakproof
