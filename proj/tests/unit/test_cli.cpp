// End-to-end checks of the command-line tools. Skipped when the tools were not
// built alongside the tests.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "leakproof/report_io.hpp"

#if defined(LEAKPROOF_CLI) && defined(LEAKPROOF_SYNTH)

namespace leakproof {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome Cmd(const std::string& args) {
  const std::string cmd = std::string(LEAKPROOF_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) o.out += buf.data();
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "leakproof_cli_tests";
    fs::remove_all(root_);
    fs::create_directories(root_);
    // About 1,000 interactions over five years.
    const std::string synth = std::string(LEAKPROOF_SYNTH) + " --users 120 --items 90 --per-user 8 --seed 3 --out " +
                              (root_ / "synthetic.csv").string();
    ASSERT_EQ(std::system(synth.c_str()), 0);
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static fs::path Data() { return root_ / "synthetic.csv"; }
  static fs::path Dir(const std::string& name) { return root_ / name; }

  static fs::path root_;
};

fs::path Cli::root_;

TEST_F(Cli, IngestWritesStatsSidecar) {
  const auto out = Dir("processed.csv");
  const auto r = Cmd("ingest --input " + Data().string() + " --schema 0:1:-:2 --k-core 2 --out " + out.string());
  ASSERT_EQ(r.code, 0);
  const auto stats = nlohmann::json::parse(Slurp(Dir("processed.stats.json")));
  EXPECT_GT(stats["n_users"].get<int>(), 0);
  EXPECT_GT(stats["n_items"].get<int>(), 0);
  EXPECT_GT(stats["n_interactions"].get<int>(), 0);
}

TEST_F(Cli, IngestBadMappingIsAUsageError) {
  EXPECT_EQ(Cmd("ingest --input " + Data().string() + " --schema 0:1:2:7").code, 2);
  EXPECT_EQ(Cmd("ingest --input " + (root_ / "missing.csv").string()).code, 2);
  EXPECT_EQ(Cmd("ingest").code, 2);
  EXPECT_EQ(Cmd("no-such-command").code, 2);
}

TEST_F(Cli, StatsWritesFigureInputs) {
  const auto dir = Dir("stats");
  ASSERT_EQ(Cmd("stats --input " + Data().string() + " --out " + dir.string()).code, 0);
  for (const char* f : {"stats.json", "active_periods.csv", "weekly.csv", "popularity.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
}

TEST_F(Cli, AuditTotals) {
  const auto tp = Cmd("audit --input " + Data().string() + " --split timepoint --timepoint 1080000000 --out " +
                      Dir("audit_tp").string());
  ASSERT_EQ(tp.code, 0);
  const auto tp_json = nlohmann::json::parse(Slurp(Dir("audit_tp") / "split.json"));
  EXPECT_EQ(tp_json["audit"]["total_future_train"], 0);
  EXPECT_EQ(tp_json["audit"]["total_future_items"], 0);

  ASSERT_EQ(Cmd("audit --input " + Data().string() + " --split leave-one-out --out " + Dir("audit_loo").string()).code,
            0);
  const auto loo = nlohmann::json::parse(Slurp(Dir("audit_loo") / "split.json"));
  EXPECT_GT(loo["audit"]["total_future_train"].get<int>(), 0);
  EXPECT_TRUE(fs::exists(Dir("audit_loo") / "audit.csv"));

  EXPECT_EQ(Cmd("audit --input " + Data().string() + " --split sideways").code, 2);
}

TEST_F(Cli, SweepRowCountsAndByteIdenticalReruns) {
  const std::string common = "sweep --input " + Data().string() +
                             " --model itemknn --test-window 2 --future 0..1 --seeds 0,1,2 --out ";
  ASSERT_EQ(Cmd(common + Dir("sweep_a").string()).code, 0);
  ASSERT_EQ(Cmd(common + Dir("sweep_b").string()).code, 0);
  for (const char* f : {"metrics.csv", "lists.csv", "runs.csv", "sweep_summary.csv"}) {
    EXPECT_EQ(Slurp(Dir("sweep_a") / f), Slurp(Dir("sweep_b") / f)) << f;
  }
  const auto summary = ReadCsv(Dir("sweep_a") / "sweep_summary.csv");
  const auto tests = std::stoul(summary.rows[0][summary.Column("test_size")]);
  EXPECT_EQ(ReadCsv(Dir("sweep_a") / "metrics.csv").rows.size(), tests * 3 * 2);
  EXPECT_TRUE(fs::exists(Dir("sweep_a") / "manifest.json"));
  EXPECT_TRUE(fs::exists(Dir("sweep_a") / "changes.csv"));
}

TEST_F(Cli, SweepFromConfigFileWithSimilarity) {
  const auto conf = Dir("exp.conf");
  {
    std::ofstream out(conf);
    out << "dataset = synthetic.csv\nmodel = popularity\ntest_window = 2\nfuture = 0..1\nseeds = 0,1,2\n"
           "similarity = true\n";
  }
  ASSERT_EQ(Cmd("sweep --config " + conf.string() + " --out " + Dir("sweep_sim").string()).code, 0);
  const auto sim = ReadCsv(Dir("sweep_sim") / "similarity.csv");
  std::size_t intrinsic = 0;
  for (const auto& row : sim.rows) {
    if (row[sim.Column("kind")] != "intrinsic") continue;
    ++intrinsic;
    EXPECT_EQ(row[sim.Column("value")], "1");
  }
  EXPECT_GT(intrinsic, 0u);
}

TEST_F(Cli, SweepConfigErrorNamesTheField) {
  const auto r = Cmd("sweep --input " + Data().string() + " --future 0..40 --out " + Dir("sweep_bad").string());
  EXPECT_EQ(r.code, 2);
  const std::string cmd = std::string(LEAKPROOF_CLI) + " sweep --input " + Data().string() +
                          " --future 0..40 --out " + Dir("sweep_bad").string() + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string all;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) all += buf.data();
  pclose(pipe);
  EXPECT_NE(all.find("future"), std::string::npos);
}

TEST_F(Cli, TimelineReportsZeroViolations) {
  for (const char* mode : {"timeline", "prequential", "sliding"}) {
    const auto r = Cmd(std::string("timeline --input ") + Data().string() + " --model popularity --mode " + mode +
                       " --window 90 --out " + Dir(std::string("tl_") + mode).string());
    EXPECT_EQ(r.code, 0) << mode;
    EXPECT_NE(r.out.find("violations: 0"), std::string::npos) << r.out;
  }
}

TEST_F(Cli, SummarizeCombinesModels) {
  for (const char* model : {"popularity", "itemknn"}) {
    ASSERT_EQ(Cmd(std::string("sweep --input ") + Data().string() + " --model " + model +
                  " --test-window 2 --future 0..1 --seeds 0 --out " + Dir(std::string("sum_") + model).string())
                  .code,
              0);
  }
  const auto r = Cmd("summarize --input " + (Dir("sum_popularity") / "sweep_summary.csv").string() + " " +
                     (Dir("sum_itemknn") / "sweep_summary.csv").string() + " --out " + Dir("summary").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(ReadCsv(Dir("summary") / "ranks.csv").rows.size(), 4u);
  EXPECT_EQ(ReadCsv(Dir("summary") / "changes.csv").rows.size(), 2u);
}

}  // namespace
}  // namespace leakproof

#else

TEST(Cli, ToolsNotBuilt) { GTEST_SKIP() << "command-line tools were not built"; }

#endif
