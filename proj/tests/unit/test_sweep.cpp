#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "leakproof/summary.hpp"
#include "leakproof/sweep.hpp"
#include "leakproof/synthetic.hpp"

namespace leakproof {
namespace {

using testing::ThreeUserDataset;
using testing::ItemNames;
using testing::kThreeUserWindow;

Dataset SmallSynthetic(std::uint64_t seed = 1) {
  SyntheticConfig cfg;
  cfg.n_users = 300;
  cfg.n_items = 200;
  cfg.seed = seed;
  return SyntheticDataset(cfg);
}

SweepConfig SmallConfig(const Dataset& d, ModelKind kind) {
  SweepConfig cfg;
  cfg.window_length = kSecondsPerYear;
  cfg.test_window = 2;
  cfg.future_from = 0;
  cfg.future_to = std::min(2, WindowCount(d, cfg.window_length) - 3);
  cfg.model.kind = kind;
  cfg.model.bpr.latent_dim = 8;
  cfg.model.bpr.epochs = 3;
  cfg.seeds = {0, 1, 2};
  return cfg;
}

TEST(SweepTrainingSet, FutureZeroStopsAtTheTestWindow) {
  const auto d = SmallSynthetic();
  const auto cfg = SmallConfig(d, ModelKind::kPopularity);
  const auto loo = SplitLeaveOneOut(d, false);
  const auto set = BuildSweepTrainingSet(d, loo, cfg, 0);
  int max_window = -1;
  for (auto i : set.train) max_window = std::max(max_window, WindowOf(d, d[i].timestamp, cfg.window_length));
  EXPECT_EQ(max_window, cfg.test_window);
  for (auto t : set.test) EXPECT_EQ(WindowOf(d, d[t].timestamp, cfg.window_length), cfg.test_window);
  std::vector<InteractionIndex> overlap;
  std::set_intersection(set.train.begin(), set.train.end(), set.test.begin(), set.test.end(),
                        std::back_inserter(overlap));
  EXPECT_TRUE(overlap.empty());
}

TEST(SweepTrainingSet, SizesGrowWithFutureWindows) {
  const auto d = SmallSynthetic();
  const auto cfg = SmallConfig(d, ModelKind::kPopularity);
  const auto loo = SplitLeaveOneOut(d, false);
  std::size_t previous = 0;
  std::vector<InteractionIndex> test;
  for (int f = 0; f <= cfg.future_to; ++f) {
    const auto set = BuildSweepTrainingSet(d, loo, cfg, f);
    EXPECT_GE(set.train.size(), previous);
    previous = set.train.size();
    if (f == 0) test = set.test;
    EXPECT_EQ(set.test, test);
  }
}

TEST(SweepTrainingSet, RequiresTestsInTheWindow) {
  const auto d = ThreeUserDataset();
  SweepConfig cfg;
  cfg.window_length = kThreeUserWindow;
  cfg.test_window = 0;
  EXPECT_THROW(BuildSweepTrainingSet(d, SplitLeaveOneOut(d, false), cfg, 0), UsageError);
  EXPECT_THROW(BuildSweepTrainingSet(d, SplitByTimepoint(d, 100), cfg, 0), UsageError);
}

TEST(Sweep, PopularityIsIdenticalAcrossSeeds) {
  const auto d = SmallSynthetic();
  const auto cfg = SmallConfig(d, ModelKind::kPopularity);
  const auto report = RunSweep(d, cfg);
  for (int f = cfg.future_from; f <= cfg.future_to; ++f) {
    const auto& first = report.Run(f, 0);
    for (auto seed : cfg.seeds) {
      const auto& r = report.Run(f, seed);
      EXPECT_EQ(r.accuracy.hr, first.accuracy.hr);
      EXPECT_EQ(r.accuracy.ndcg, first.accuracy.ndcg);
      for (std::size_t t = 0; t < r.instances.size(); ++t) {
        EXPECT_EQ(r.instances[t].list.items, first.instances[t].list.items);
      }
    }
  }
}

TEST(Sweep, RowCountContract) {
  const auto d = SmallSynthetic(5);
  auto cfg = SmallConfig(d, ModelKind::kItemKnn);
  const auto report = RunSweep(d, cfg);
  const std::size_t configs = static_cast<std::size_t>(cfg.future_to - cfg.future_from + 1);
  ASSERT_EQ(report.runs.size(), configs * cfg.seeds.size());
  ASSERT_EQ(report.windows.size(), configs);
  std::size_t rows = 0;
  for (const auto& r : report.runs) rows += r.instances.size();
  EXPECT_EQ(rows, report.windows.front().test_size * cfg.seeds.size() * configs);
  for (std::size_t k = 1; k < report.runs.size(); ++k) {
    const auto& a = report.runs[k - 1];
    const auto& b = report.runs[k];
    EXPECT_TRUE(a.future_windows < b.future_windows || (a.future_windows == b.future_windows && a.seed < b.seed));
  }
}

TEST(Sweep, ParallelRunsMatchSerialRuns) {
  const auto d = SmallSynthetic(9);
  auto cfg = SmallConfig(d, ModelKind::kBpr);
  const auto serial = RunSweep(d, cfg);
  cfg.jobs = 4;
  const auto parallel = RunSweep(d, cfg);
  ASSERT_EQ(serial.runs.size(), parallel.runs.size());
  for (std::size_t k = 0; k < serial.runs.size(); ++k) {
    EXPECT_EQ(serial.runs[k].accuracy.hr, parallel.runs[k].accuracy.hr);
    for (std::size_t t = 0; t < serial.runs[k].instances.size(); ++t) {
      EXPECT_EQ(serial.runs[k].instances[t].list.items, parallel.runs[k].instances[t].list.items);
    }
  }
}

// Window-granular form of the zero-future law: with no future windows, no
// recommended item can be released after the end of the test window.
TEST(Sweep, NothingFromLaterWindowsWithoutFutureData) {
  const auto d = SmallSynthetic(3);
  for (auto kind : {ModelKind::kPopularity, ModelKind::kItemKnn, ModelKind::kBpr}) {
    auto cfg = SmallConfig(d, kind);
    cfg.future_to = 0;
    const auto report = RunSweep(d, cfg);
    const Timestamp window_end = d.t_start() + (cfg.test_window + 1) * cfg.window_length;
    for (const auto& r : report.runs) {
      for (const auto& inst : r.instances) {
        for (auto item : inst.list.items) EXPECT_LT(d.release_time(item), window_end);
      }
    }
  }
}

// When every test instance is the last event of the training horizon, the
// per-instance count is zero exactly.
TEST(Sweep, ZeroFutureItemsWhenTestsCloseTheWindow) {
  std::vector<RawInteraction> raw;
  for (int u = 0; u < 30; ++u) {
    for (int k = 0; k < 4; ++k) raw.push_back({"u" + std::to_string(u), "i" + std::to_string((u + k) % 25), u * 10 + k});
  }
  raw.push_back({"tail", "late", 2000});
  raw.push_back({"tail", "late2", 2001});
  const auto d = Dataset::FromRaw(raw);
  SweepConfig cfg;
  cfg.window_length = 1000;
  cfg.test_window = 0;
  cfg.model.kind = ModelKind::kItemKnn;
  cfg.seeds = {0, 1};
  const auto report = RunSweep(d, cfg);
  const auto loo = SplitLeaveOneOut(d, false);
  const auto set = BuildSweepTrainingSet(d, loo, cfg, 0);
  Timestamp latest_train = 0;
  for (auto i : set.train) latest_train = std::max(latest_train, d[i].timestamp);
  for (const auto& r : report.runs) {
    for (const auto& inst : r.instances) {
      if (inst.asof >= latest_train) EXPECT_EQ(inst.future_items, 0u);
    }
  }
}

TEST(Sweep, ConfigErrorsNameTheField) {
  const auto d = SmallSynthetic();
  auto cfg = SmallConfig(d, ModelKind::kPopularity);
  cfg.future_to = 50;
  try {
    RunSweep(d, cfg);
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("future"), std::string::npos);
  }
  cfg = SmallConfig(d, ModelKind::kPopularity);
  cfg.test_window = 99;
  cfg.seeds.clear();
  const auto problems = cfg.Problems(d);
  ASSERT_GE(problems.size(), 2u);
  EXPECT_EQ(problems[0].rfind("test_window", 0), 0u);
}

TEST(ThreeUser, FutureInteractionsLeakUserCItemsToUserA) {
  const auto d = ThreeUserDataset();
  SweepConfig cfg;
  cfg.window_length = kThreeUserWindow;
  cfg.test_window = 1;
  cfg.future_from = 0;
  cfg.future_to = 1;
  cfg.model.kind = ModelKind::kItemKnn;
  cfg.model.neighborhood_size = 10;
  cfg.seeds = {0};
  const auto report = RunSweep(d, cfg);
  const std::set<std::string> c_items{"c1", "c2", "c3"};
  const auto recommends_c = [&](int f) {
    const auto& run = report.Run(f, 0);
    EXPECT_EQ(run.instances.size(), 1u);
    EXPECT_EQ(d.user_name(run.instances[0].user), "A");
    for (const auto& name : ItemNames(d, run.instances[0].list)) {
      if (c_items.contains(name)) return true;
    }
    return false;
  };
  EXPECT_FALSE(recommends_c(0));
  EXPECT_TRUE(recommends_c(1));
  EXPECT_EQ(report.Run(0, 0).future_item_total, 0u);
  EXPECT_GT(report.Run(1, 0).future_item_total, 0u);
}

TEST(Similarity, SelfComparisonIsPerfect) {
  const auto d = SmallSynthetic(4);
  auto cfg = SmallConfig(d, ModelKind::kPopularity);
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6};
  cfg.future_to = 0;
  const auto report = RunSweep(d, cfg);
  const auto s = AnalyzeSimilarity(report, 0, report, 0);
  EXPECT_EQ(s.intrinsic_reference.pair_count, 21u);
  EXPECT_EQ(s.extrinsic.pair_count, 49u);
  for (double v : s.intrinsic_reference.values) EXPECT_DOUBLE_EQ(v, 1.0);
  for (double v : s.extrinsic.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Similarity, TwoSeedCounts) {
  const auto d = SmallSynthetic(4);
  auto cfg = SmallConfig(d, ModelKind::kBpr);
  cfg.seeds = {0, 1};
  cfg.future_to = 1;
  const auto report = RunSweep(d, cfg);
  const auto s = AnalyzeSimilarity(report, 0, report, 1);
  EXPECT_EQ(s.intrinsic_reference.pair_count, 1u);
  EXPECT_EQ(s.intrinsic_compared.pair_count, 1u);
  EXPECT_EQ(s.extrinsic.pair_count, 4u);
  EXPECT_EQ(s.extrinsic.values.size(), report.windows.front().test_size);
}

TEST(SummaryTablesTest, SingleConfigHasEmptyRange) {
  std::vector<SweepSummary> sweeps{{"m", {{0, 10, 5, 1, 0.2, 0.1, 0}}}};
  const auto t = Summarize(sweeps);
  ASSERT_EQ(t.changes.size(), 1u);
  EXPECT_TRUE(t.changes[0].empty);
  ASSERT_EQ(t.ranks.size(), 1u);
  EXPECT_EQ(t.ranks[0].ranks[0].rank, 1);
}

TEST(SummaryTablesTest, ChangeRange) {
  std::vector<SweepSummary> sweeps{
      {"m", {{0, 10, 5, 1, 0.10, 0.10, 0}, {1, 11, 5, 1, 0.11, 0.12, 0}, {2, 12, 5, 1, 0.09, 0.10, 0}}}};
  const auto t = Summarize(sweeps);
  EXPECT_FALSE(t.changes[0].empty);
  EXPECT_NEAR(t.changes[0].min_hr, -10.0, 1e-9);
  EXPECT_NEAR(t.changes[0].max_hr, 10.0, 1e-9);
  EXPECT_NEAR(t.changes[0].max_ndcg, 20.0, 1e-9);
}

TEST(SummaryTablesTest, RankSwap) {
  std::vector<SweepSummary> sweeps{{"x", {{0, 1, 1, 1, 0.3, 0.3, 0}, {1, 1, 1, 1, 0.1, 0.1, 0}}},
                                   {"y", {{0, 1, 1, 1, 0.2, 0.2, 0}, {1, 1, 1, 1, 0.4, 0.4, 0}}}};
  const auto t = Summarize(sweeps);
  ASSERT_EQ(t.ranks.size(), 2u);
  EXPECT_EQ(t.ranks[0].ranks[0].model, "x");
  EXPECT_EQ(t.ranks[1].ranks[0].model, "y");
  std::vector<SweepSummary> missing{{"z", {{1, 1, 1, 1, 0.3, 0.3, 0}}}};
  EXPECT_THROW(Summarize(missing), UsageError);
}

TEST(ParallelForTest, RethrowsLowestIndexFailure) {
  std::vector<int> hits(50, 0);
  ParallelFor(50, 4, [&](std::size_t k) { hits[k] = 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 50);
  try {
    ParallelFor(10, 3, [](std::size_t k) {
      if (k == 3 || k == 7) throw std::runtime_error("boom " + std::to_string(k));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom 3");
  }
}

}  // namespace
}  // namespace leakproof
