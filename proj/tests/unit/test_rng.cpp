#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "leakproof/rng.hpp"
#include "leakproof/synthetic.hpp"

namespace leakproof {
namespace {

TEST(RngTest, EngineMatchesTheStandardSequence) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ULL);
  Rng rng(5489);
  for (int k = 0; k < 9999; ++k) rng.Next();
  EXPECT_EQ(rng.Next(), 9981545732273789042ULL);
}

TEST(RngTest, UniformIndexCoversTheRange) {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int k = 0; k < 7000; ++k) ++hits[rng.UniformIndex(7)];
  for (int h : hits) {
    EXPECT_GT(h, 850);
    EXPECT_LT(h, 1150);
  }
  for (int k = 0; k < 1000; ++k) {
    const auto v = rng.UniformInt(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    const double r = rng.UniformReal();
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(RngTest, NormalMoments) {
  Rng rng(2);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double x = rng.Normal(1.0, 2.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 0.05);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 2.0, 0.05);
}

TEST(RngTest, SamplingWithoutReplacementIsDistinct) {
  Rng rng(3);
  const auto s = rng.SampleWithoutReplacement(100, 40);
  EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), 40u);
  EXPECT_EQ(rng.SampleWithoutReplacement(5, 10).size(), 5u);
}

TEST(RngTest, SaveAndLoadResumeTheSequence) {
  Rng a(77);
  a.Next();
  std::stringstream state;
  a.Save(state);
  Rng b(0);
  b.Load(state);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.Next(), b.Next());
}

TEST(SyntheticTest, DeterministicAndWellFormed) {
  SyntheticConfig cfg;
  cfg.n_users = 200;
  cfg.n_items = 100;
  cfg.seed = 5;
  const auto a = GenerateSynthetic(cfg);
  const auto b = GenerateSynthetic(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].user, b[k].user);
    EXPECT_EQ(a[k].item, b[k].item);
    EXPECT_EQ(a[k].timestamp, b[k].timestamp);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& x : a) {
    EXPECT_TRUE(pairs.emplace(x.user, x.item).second);
    EXPECT_GE(x.timestamp, cfg.t_start);
    EXPECT_LT(x.timestamp, cfg.t_start + cfg.duration);
  }
  cfg.n_items = 0;
  EXPECT_THROW(GenerateSynthetic(cfg), UsageError);
}

TEST(SyntheticTest, ItemsAreReleasedThroughoutTheSpan) {
  SyntheticConfig cfg;
  cfg.n_users = 1000;
  cfg.n_items = 400;
  cfg.seed = 6;
  const auto d = SyntheticDataset(cfg);
  const Timestamp mid = d.t_start() + (d.t_end() - d.t_start()) / 2;
  std::size_t late = 0;
  for (const auto& s : d.item_spans()) late += s.first > mid ? 1 : 0;
  EXPECT_GT(late, d.n_items() / 5);
}

}  // namespace
}  // namespace leakproof
