#include <fstream>

#include <gtest/gtest.h>

#include "leakproof/config.hpp"

namespace leakproof {
namespace {

TEST(ConfigParse, SectionsCommentsAndWhitespace) {
  const auto kv = ParseKeyValues(R"(
# experiment
dataset = data/x.csv   # trailing comment
model=bpr
[bpr]
latent_dim = 16
  [ search ]
trials = 4
)");
  EXPECT_EQ(kv.at("dataset"), "data/x.csv");
  EXPECT_EQ(kv.at("model"), "bpr");
  EXPECT_EQ(kv.at("bpr.latent_dim"), "16");
  EXPECT_EQ(kv.at("search.trials"), "4");
}

TEST(ConfigParse, SyntaxErrorsCarryLineNumbers) {
  try {
    ParseKeyValues("dataset = x\nthis line is wrong\n[broken\n");
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.problems().size(), 2u);
    EXPECT_EQ(e.problems()[0].rfind("line 2", 0), 0u);
    EXPECT_EQ(e.problems()[1].rfind("line 3", 0), 0u);
  }
}

TEST(ConfigBuild, Defaults) {
  const auto cfg = BuildExperimentConfig({{"dataset", "/abs/d.csv"}});
  EXPECT_EQ(cfg.dataset, std::filesystem::path("/abs/d.csv"));
  EXPECT_EQ(cfg.sweep.window_length, kSecondsPerYear);
  EXPECT_EQ(cfg.sweep.model.kind, ModelKind::kPopularity);
  EXPECT_EQ(cfg.timeline.window, kSecondsPerWeek);
  EXPECT_EQ(cfg.schema.ToString(), ProcessedSchema().ToString());
  EXPECT_FALSE(cfg.similarity);
}

TEST(ConfigBuild, FullConfiguration) {
  const auto cfg = BuildExperimentConfig({{"dataset", "d.csv"},
                                          {"schema", "1:0:2:3"},
                                          {"delimiter", "tab"},
                                          {"header", "yes"},
                                          {"window_days", "30"},
                                          {"test_window", "3"},
                                          {"future", "1..4"},
                                          {"seeds", "0, 1, 2,3"},
                                          {"topn", "10"},
                                          {"jobs", "2"},
                                          {"model", "bpr"},
                                          {"bpr.latent_dim", "16"},
                                          {"bpr.learning_rate", "0.01"},
                                          {"search.trials", "3"},
                                          {"search.learning_rate", "0.001..0.05"},
                                          {"similarity", "true"},
                                          {"timeline.mode", "sliding"},
                                          {"timeline.window_days", "14"},
                                          {"timeline.origin", "1234"},
                                          {"timeline.split", "timepoint"},
                                          {"timeline.timepoint", "999"}},
                                         {}, "/base");
  EXPECT_EQ(cfg.dataset, std::filesystem::path("/base/d.csv"));
  EXPECT_EQ(cfg.schema.user_column, 1);
  EXPECT_EQ(cfg.schema.delimiter, '\t');
  EXPECT_TRUE(cfg.schema.header);
  EXPECT_EQ(cfg.sweep.window_length, 30 * kSecondsPerDay);
  EXPECT_EQ(cfg.sweep.test_window, 3);
  EXPECT_EQ(cfg.sweep.future_from, 1);
  EXPECT_EQ(cfg.sweep.future_to, 4);
  EXPECT_EQ(cfg.sweep.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3}));
  EXPECT_EQ(cfg.sweep.topn, 10u);
  EXPECT_EQ(cfg.timeline.topn, 10u);
  EXPECT_EQ(cfg.sweep.model.bpr.latent_dim, 16);
  EXPECT_DOUBLE_EQ(cfg.sweep.tuning.bpr_space.max_learning_rate, 0.05);
  EXPECT_TRUE(cfg.sweep.tuning.freeze_at_reference);
  EXPECT_EQ(cfg.timeline.mode, TimelineMode::kSliding);
  EXPECT_EQ(cfg.timeline.window, 14 * kSecondsPerDay);
  EXPECT_EQ(*cfg.timeline.origin, 1234);
  EXPECT_EQ(cfg.mask_strategy, SplitStrategy::kByTimepoint);
  EXPECT_EQ(cfg.mask_params.timepoint, 999);
}

TEST(ConfigBuild, OverridesWin) {
  const auto cfg = BuildExperimentConfig({{"dataset", "/d.csv"}, {"model", "bpr"}}, {{"model", "itemknn"}});
  EXPECT_EQ(cfg.sweep.model.kind, ModelKind::kItemKnn);
  EXPECT_EQ(cfg.entries.at("model"), "itemknn");
}

TEST(ConfigBuild, AllProblemsAreReportedTogether) {
  try {
    BuildExperimentConfig({{"window_days", "-1"},
                           {"future", "3..1"},
                           {"model", "svd"},
                           {"colour", "blue"},
                           {"topn", "ten"},
                           {"seeds", "1,x"}});
    FAIL();
  } catch (const ConfigError& e) {
    const auto& p = e.problems();
    const auto mentions = [&](const std::string& key) {
      return std::any_of(p.begin(), p.end(), [&](const std::string& s) { return s.rfind(key, 0) == 0; });
    };
    EXPECT_TRUE(mentions("dataset"));
    EXPECT_TRUE(mentions("window_days"));
    EXPECT_TRUE(mentions("future"));
    EXPECT_TRUE(mentions("model"));
    EXPECT_TRUE(mentions("colour"));
    EXPECT_TRUE(mentions("topn"));
    EXPECT_TRUE(mentions("seeds"));
  }
}

TEST(ConfigBuild, BprRangesAreValidated) {
  EXPECT_THROW(BuildExperimentConfig({{"dataset", "/d"}, {"model", "bpr"}, {"bpr.latent_dim", "500"}}), ConfigError);
  EXPECT_NO_THROW(BuildExperimentConfig({{"dataset", "/d"}, {"model", "popularity"}, {"bpr.latent_dim", "500"}}));
  EXPECT_THROW(BuildExperimentConfig({{"dataset", "/d"}, {"search.trials", "2"}, {"search.latent_dim", "1..8"}}),
               ConfigError);
}

TEST(ConfigLoad, ResolvesPathsAgainstTheFile) {
  const auto dir = std::filesystem::temp_directory_path() / "leakproof_config_load";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "exp.conf");
    out << "dataset = interactions.csv\nfuture = 2\n";
  }
  const auto cfg = LoadExperimentConfig(dir / "exp.conf");
  EXPECT_EQ(cfg.dataset, dir / "interactions.csv");
  EXPECT_EQ(cfg.sweep.future_from, 2);
  EXPECT_EQ(cfg.sweep.future_to, 2);
  EXPECT_THROW(LoadExperimentConfig(dir / "missing.conf"), UsageError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace leakproof
