// Throughput of the hot paths on synthetic logs.

#include <map>

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include "leakproof/corpus.hpp"
#include "leakproof/models.hpp"
#include "leakproof/splits.hpp"
#include "leakproof/sweep.hpp"
#include "leakproof/synthetic.hpp"
#include "leakproof/timeline.hpp"

namespace lp = leakproof;

namespace {

const lp::Dataset& Data(std::uint32_t users) {
  static std::map<std::uint32_t, lp::Dataset> cache;
  auto it = cache.find(users);
  if (it == cache.end()) {
    lp::SyntheticConfig cfg;
    cfg.n_users = users;
    cfg.n_items = users / 2;
    cfg.seed = 11;
    it = cache.emplace(users, lp::SyntheticDataset(cfg)).first;
  }
  return it->second;
}

void BM_KCore(benchmark::State& state) {
  const auto& d = Data(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lp::KCoreFilter(d, 5).size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}
BENCHMARK(BM_KCore)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BprEpoch(benchmark::State& state) {
  const auto& d = Data(static_cast<std::uint32_t>(state.range(0)));
  lp::ModelSpec spec;
  spec.kind = lp::ModelKind::kBpr;
  spec.bpr.epochs = 1;
  for (auto _ : state) {
    auto m = lp::MakeModel(spec, 0);
    m->Fit(d.interactions());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}
BENCHMARK(BM_BprEpoch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ItemKnnRecommend(benchmark::State& state) {
  const auto& d = Data(2000);
  lp::ModelSpec spec;
  spec.kind = lp::ModelKind::kItemKnn;
  spec.neighborhood_size = static_cast<std::size_t>(state.range(0));
  auto m = lp::MakeModel(spec, 0);
  m->Fit(d.interactions());
  std::uint32_t u = 0;
  for (auto _ : state) {
    lp::Query q;
    q.user = lp::UserId{u++ % static_cast<std::uint32_t>(d.n_users())};
    benchmark::DoNotOptimize(m->Recommend(q).items.size());
  }
}
BENCHMARK(BM_ItemKnnRecommend)->Arg(50)->Arg(200);

void BM_SweepPopularity(benchmark::State& state) {
  const auto& d = Data(2000);
  lp::SweepConfig cfg;
  cfg.test_window = 2;
  cfg.future_to = 2;
  for (auto _ : state) benchmark::DoNotOptimize(lp::RunSweep(d, cfg).runs.size());
}
BENCHMARK(BM_SweepPopularity)->Unit(benchmark::kMillisecond);

void BM_Timeline(benchmark::State& state) {
  const auto& d = Data(1000);
  const auto tests = lp::SplitLeaveOneOut(d, false).test;
  lp::ModelSpec spec;
  spec.kind = lp::ModelKind::kItemKnn;
  lp::TimelineOptions opt;
  opt.mode = static_cast<lp::TimelineMode>(state.range(0));
  opt.window = 26 * lp::kSecondsPerWeek;
  for (auto _ : state) benchmark::DoNotOptimize(lp::RunTimeline(d, tests, spec, 0, opt).violations);
  state.SetLabel(std::string(lp::ToString(opt.mode)));
}
BENCHMARK(BM_Timeline)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
