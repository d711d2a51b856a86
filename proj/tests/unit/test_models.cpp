#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "leakproof/models.hpp"
#include "leakproof/rng.hpp"
#include "leakproof/synthetic.hpp"

namespace leakproof {
namespace {

using testing::AllRows;
using testing::Item;
using testing::ItemNames;
using testing::MakeDataset;
using testing::User;

Query For(UserId u, std::size_t n, bool exclude_seen = false) {
  Query q;
  q.user = u;
  q.n = n;
  q.exclude_seen = exclude_seen;
  return q;
}

TEST(Popularity, RanksByCount) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "a", 2}, {"u3", "a", 3}, {"u1", "b", 4}, {"u2", "c", 5},
                              {"u3", "c", 6}, {"z", "zz", 7}});
  PopularityModel m;
  m.Fit(AllRows(d));
  EXPECT_EQ(m.count(Item(d, "a")), 3u);
  const auto list = m.Recommend(For(User(d, "z"), 2));
  EXPECT_EQ(ItemNames(d, list), (std::vector<std::string>{"a", "c"}));
  EXPECT_DOUBLE_EQ(list.scores[0], 3.0);
}

TEST(Popularity, TiesBreakByIdentifier) {
  const auto d = MakeDataset({{"u1", "b", 1}, {"u2", "a", 2}});
  PopularityModel m;
  m.Fit(AllRows(d));
  EXPECT_EQ(ItemNames(d, m.Recommend(For(User(d, "u1"), 2))), (std::vector<std::string>{"a", "b"}));
}

TEST(Popularity, UpdateChangesTheOrder) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "a", 2}, {"u3", "a", 3}, {"u1", "b", 4}, {"v1", "b", 5},
                              {"v2", "b", 6}, {"v3", "b", 7}});
  PopularityModel m;
  const auto rows = AllRows(d);
  m.Fit(std::span(rows).first(4));
  EXPECT_EQ(ItemNames(d, m.Recommend(For(User(d, "v1"), 1))).front(), "a");
  m.Update(std::span(rows).subspan(4));
  EXPECT_EQ(m.count(Item(d, "b")), 4u);
  EXPECT_EQ(ItemNames(d, m.Recommend(For(User(d, "v1"), 1))).front(), "b");
}

TEST(Recommender, CatalogExclusionsAndCandidates) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "b", 2}, {"u2", "c", 3}, {"u3", "d", 4}});
  PopularityModel m;
  const auto rows = AllRows(d);
  m.Fit(std::span(rows).first(3));
  EXPECT_FALSE(m.InCatalog(Item(d, "d")));
  EXPECT_EQ(m.catalog_size(), 3u);
  EXPECT_EQ(*m.max_consumed_timestamp(), 3);

  auto q = For(User(d, "u2"), 10, true);
  auto names = ItemNames(d, m.Recommend(q));
  EXPECT_EQ(names, (std::vector<std::string>{"a"}));

  ItemMask mask(d.n_items());
  mask.Allow(Item(d, "b"));
  q = For(User(d, "u1"), 10);
  q.candidates = &mask;
  EXPECT_EQ(ItemNames(d, m.Recommend(q)), (std::vector<std::string>{"b"}));

  const std::vector<ItemId> excluded{Item(d, "a")};
  q = For(User(d, "u1"), 10);
  q.exclusions = excluded;
  EXPECT_EQ(ItemNames(d, m.Recommend(q)), (std::vector<std::string>{"b", "c"}));

  EXPECT_TRUE(m.Recommend(For(User(d, "u1"), 0)).items.empty());
  m.Update(std::span(rows).subspan(3));
  EXPECT_TRUE(m.InCatalog(Item(d, "d")));
}

TEST(Recommender, FitReplacesState) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "b", 2}});
  PopularityModel m;
  const auto rows = AllRows(d);
  m.Fit(rows);
  m.Fit(std::span(rows).subspan(1));
  EXPECT_EQ(m.consumed_count(), 1u);
  EXPECT_FALSE(m.InCatalog(Item(d, "a")));
  EXPECT_EQ(m.count(Item(d, "a")), 0u);
}

TEST(ItemKnn, SimilarityExamples) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "a", 2}, {"u1", "b", 3}, {"u2", "b", 4}, {"u1", "c", 5},
                              {"u3", "d", 6}, {"u2", "e", 7}, {"u3", "e", 8}});
  ItemKnnModel m(10);
  m.Fit(AllRows(d));
  EXPECT_DOUBLE_EQ(m.Similarity(Item(d, "a"), Item(d, "b")), 1.0);
  EXPECT_DOUBLE_EQ(m.Similarity(Item(d, "c"), Item(d, "d")), 0.0);
  // U_a = {u1, u2}, U_e = {u2, u3}: one shared user over sqrt(2 * 2).
  EXPECT_DOUBLE_EQ(m.Similarity(Item(d, "a"), Item(d, "e")), 0.5);
  EXPECT_DOUBLE_EQ(m.Similarity(Item(d, "e"), Item(d, "a")), 0.5);
}

TEST(ItemKnn, EmptyHistoryFallsBackToPopularity) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "a", 2}, {"u1", "b", 3}, {"new", "zz", 9}});
  ItemKnnModel m;
  const auto rows = AllRows(d);
  m.Fit(std::span(rows).first(3));
  const auto list = m.Recommend(For(User(d, "new"), 5));
  EXPECT_TRUE(list.fallback);
  EXPECT_EQ(ItemNames(d, list), (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(m.Recommend(For(User(d, "u1"), 5)).fallback);
}

// Brute force: rebuild user sets, compute every cosine, select neighbours by
// full sort and accumulate scores.
TEST(ItemKnn, MatchesBruteForceOracle) {
  SyntheticConfig cfg;
  cfg.n_users = 80;
  cfg.n_items = 60;
  cfg.seed = 21;
  const auto d = SyntheticDataset(cfg);
  for (std::size_t k : {3u, 10u, 100u}) {
    ItemKnnModel m(k);
    m.Fit(AllRows(d));
    std::vector<std::set<std::uint32_t>> users_of(d.n_items());
    std::vector<std::set<std::uint32_t>> items_of(d.n_users());
    for (const auto& x : d.interactions()) {
      users_of[x.item.value].insert(x.user.value);
      items_of[x.user.value].insert(x.item.value);
    }
    const auto cosine = [&](std::uint32_t a, std::uint32_t b) {
      std::size_t shared = 0;
      for (auto u : users_of[a]) shared += users_of[b].count(u);
      return shared / std::sqrt(static_cast<double>(users_of[a].size() * users_of[b].size()));
    };
    std::vector<std::vector<std::pair<double, std::uint32_t>>> neighbours(d.n_items());
    for (std::uint32_t a = 0; a < d.n_items(); ++a) {
      for (std::uint32_t b = 0; b < d.n_items(); ++b) {
        if (a == b) continue;
        const double s = cosine(a, b);
        if (s > 0) neighbours[a].emplace_back(s, b);
      }
      std::sort(neighbours[a].begin(), neighbours[a].end(),
                [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
      if (neighbours[a].size() > k) neighbours[a].resize(k);
      const auto got = m.Neighbors(ItemId{a});
      ASSERT_EQ(got.size(), neighbours[a].size());
      for (std::size_t r = 0; r < got.size(); ++r) {
        EXPECT_EQ(got[r].first.value, neighbours[a][r].second);
        EXPECT_NEAR(got[r].second, neighbours[a][r].first, 1e-12);
      }
    }
    for (std::uint32_t u = 0; u < d.n_users(); u += 7) {
      std::vector<double> score(d.n_items(), 0.0);
      for (auto j : items_of[u]) {
        for (const auto& [s, i] : neighbours[j]) score[i] += s;
      }
      std::vector<std::pair<double, std::uint32_t>> ranked;
      for (std::uint32_t i = 0; i < d.n_items(); ++i) {
        if (!items_of[u].contains(i)) ranked.emplace_back(score[i], i);
      }
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
      const auto list = m.Recommend(For(UserId{u}, 20, true));
      ASSERT_EQ(list.items.size(), std::min<std::size_t>(20, ranked.size()));
      for (std::size_t r = 0; r < list.items.size(); ++r) {
        EXPECT_NEAR(list.scores[r], ranked[r].first, 1e-9);
      }
    }
  }
}

TEST(ItemKnn, IncrementalUpdateEqualsRefit) {
  SyntheticConfig cfg;
  cfg.n_users = 60;
  cfg.n_items = 40;
  cfg.seed = 2;
  const auto d = SyntheticDataset(cfg);
  const auto rows = AllRows(d);
  ItemKnnModel batch(20);
  batch.Fit(rows);
  ItemKnnModel incremental(20);
  incremental.Fit(std::span(rows).first(rows.size() / 2));
  for (std::size_t k = rows.size() / 2; k < rows.size(); ++k) incremental.Update(std::span(rows).subspan(k, 1));
  for (std::uint32_t u = 0; u < d.n_users(); u += 5) {
    const auto a = batch.Recommend(For(UserId{u}, 20, true));
    const auto b = incremental.Recommend(For(UserId{u}, 20, true));
    EXPECT_EQ(a.items, b.items);
  }
}

TEST(ModelFactory, NamesAndSeeds) {
  for (auto kind : {ModelKind::kPopularity, ModelKind::kItemKnn, ModelKind::kBpr}) {
    EXPECT_EQ(ParseModelKind(ToString(kind)), kind);
    ModelSpec spec;
    spec.kind = kind;
    EXPECT_EQ(MakeModel(spec, 3)->kind(), ToString(kind));
  }
  EXPECT_THROW(ParseModelKind("svd"), UsageError);
  ModelSpec spec;
  spec.kind = ModelKind::kBpr;
  const auto model = MakeModel(spec, 99);
  EXPECT_EQ(dynamic_cast<const BprModel&>(*model).params().seed, 99u);
}

TEST(Checkpoint, PopularityAndItemKnnRoundTrip) {
  const auto d = MakeDataset({{"u1", "a", 1}, {"u2", "a", 2}, {"u1", "b", 3}, {"u3", "c", 4}});
  const auto path = std::filesystem::temp_directory_path() / "leakproof_ckpt_knn.txt";
  for (auto kind : {ModelKind::kPopularity, ModelKind::kItemKnn}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.neighborhood_size = 7;
    auto m = MakeModel(spec, 0);
    m->Fit(AllRows(d));
    SaveCheckpoint(*m, path);
    const auto back = LoadCheckpoint(path);
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(back->Params(), m->Params());
    EXPECT_EQ(back->consumed(), m->consumed());
    for (std::uint32_t u = 0; u < d.n_users(); ++u) {
      EXPECT_EQ(back->Recommend(For(UserId{u}, 5)).items, m->Recommend(For(UserId{u}, 5)).items);
    }
  }
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace leakproof
