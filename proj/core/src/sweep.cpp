#include "leakproof/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <thread>

#include <spdlog/spdlog.h>

namespace leakproof {
namespace {

std::vector<Timestamp> ReleaseTimes(const Dataset& d) {
  std::vector<Timestamp> out(d.n_items());
  for (std::uint32_t i = 0; i < d.n_items(); ++i) out[i] = d.release_time(ItemId{i});
  return out;
}

std::vector<Interaction> Gather(const Dataset& d, std::span<const InteractionIndex> indices) {
  std::vector<Interaction> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(d[i]);
  return out;
}

// Second-last interaction of every user tested in the window.
std::vector<InteractionIndex> ValidationFor(const Dataset& d, std::span<const InteractionIndex> test) {
  std::vector<std::int64_t> second(d.n_users(), -1);
  std::vector<std::int64_t> last(d.n_users(), -1);
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    const auto u = d[i].user.value;
    second[u] = last[u];
    last[u] = i;
  }
  std::vector<InteractionIndex> out;
  for (auto t : test) {
    const auto s = second[d[t].user.value];
    if (s >= 0) out.push_back(static_cast<InteractionIndex>(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ModelSpec TunedSpec(const Dataset& d, const SweepConfig& cfg, const SweepTrainingSet& set) {
  ModelSpec spec = cfg.model;
  if (cfg.tuning.trials == 0 || spec.kind == ModelKind::kPopularity) return spec;
  const auto validation_idx = ValidationFor(d, set.test);
  std::vector<InteractionIndex> fit_idx;
  std::set_difference(set.train.begin(), set.train.end(), validation_idx.begin(), validation_idx.end(),
                      std::back_inserter(fit_idx));
  const auto fit = Gather(d, fit_idx);
  const auto validation = Gather(d, validation_idx);
  if (validation.empty()) throw UsageError("tuning requested but no test user has a validation interaction");
  if (spec.kind == ModelKind::kBpr) {
    auto base = spec.bpr;
    base.seed = cfg.seeds.front();
    const auto result = TuneBpr(fit, validation, cfg.tuning.bpr_space, base, cfg.tuning.trials, cfg.tuning.seed, cfg.topn);
    spec.bpr = result.best;
    spdlog::info("tuned bpr: trial {} dim={} lr={:.3g} reg={:.3g} HR@{}={:.4f}", result.best_trial,
                 spec.bpr.latent_dim, spec.bpr.learning_rate, spec.bpr.regularization, cfg.topn,
                 result.trials[result.best_trial].second);
  } else {
    const auto result = TuneItemKnn(fit, validation, cfg.tuning.min_neighbors, cfg.tuning.max_neighbors,
                                    cfg.tuning.trials, cfg.tuning.seed, cfg.topn);
    spec.neighborhood_size = result.best;
    spdlog::info("tuned itemknn: neighborhood_size={}", spec.neighborhood_size);
  }
  return spec;
}

RunResult ExecuteRun(const Dataset& d, const SweepConfig& cfg, const ModelSpec& spec, const SweepTrainingSet& set,
                     const std::vector<Timestamp>& release, int future_windows, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  RunResult run;
  run.future_windows = future_windows;
  run.seed = seed;
  run.train_size = set.train.size();

  auto model = MakeModel(spec, seed);
  run.params = model->Params();
  model->Fit(Gather(d, set.train));

  double hr_sum = 0.0;
  double ndcg_sum = 0.0;
  run.instances.reserve(set.test.size());
  for (auto t : set.test) {
    const auto& x = d[t];
    Query q;
    q.user = x.user;
    q.n = cfg.topn;
    q.asof = x.timestamp;
    q.exclude_seen = cfg.exclude_seen;
    InstanceResult r;
    r.test = t;
    r.user = x.user;
    r.target = x.item;
    r.asof = x.timestamp;
    r.list = model->Recommend(q);
    r.hit = HitAtN(r.list, x.item);
    r.ndcg = NdcgAtN(r.list, x.item);
    r.future_items = CountFutureItems(r.list, release, x.timestamp);
    hr_sum += r.hit;
    ndcg_sum += r.ndcg;
    run.future_item_total += r.future_items;
    run.instances.push_back(std::move(r));
  }
  const auto n = static_cast<double>(set.test.size());
  run.accuracy = {hr_sum / n, ndcg_sum / n, cfg.topn, set.test.size()};
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

}  // namespace

std::string SweepConfig::Label() const { return label.empty() ? std::string(ToString(model.kind)) : label; }

int WindowCount(const Dataset& d, Timestamp window_length) {
  if (d.empty()) return 0;
  return static_cast<int>((d.t_end() - d.t_start()) / window_length) + 1;
}

int WindowOf(const Dataset& d, Timestamp t, Timestamp window_length) {
  return static_cast<int>((t - d.t_start()) / window_length);
}

std::vector<std::string> SweepConfig::Problems(const Dataset& d) const {
  std::vector<std::string> problems;
  if (window_length <= 0) {
    problems.push_back("window: window length must be positive");
    return problems;
  }
  const int windows = WindowCount(d, window_length);
  if (test_window < 0 || test_window >= windows) {
    problems.push_back("test_window: index " + std::to_string(test_window) + " outside the " +
                       std::to_string(windows) + " windows of the dataset");
  }
  if (future_from < 0 || future_to < future_from) {
    problems.push_back("future: range " + std::to_string(future_from) + ".." + std::to_string(future_to) +
                       " must be non-negative and ascending");
  } else if (test_window + future_to >= windows) {
    problems.push_back("future: test_window + " + std::to_string(future_to) + " future windows exceeds the " +
                       std::to_string(windows) + " windows of the dataset");
  }
  if (seeds.empty()) problems.push_back("seeds: at least one seed is required");
  if (topn == 0) problems.push_back("topn: must be positive");
  if (jobs == 0) problems.push_back("jobs: must be positive");
  if (model.kind == ModelKind::kBpr) {
    try {
      model.bpr.Validate();
    } catch (const UsageError& e) {
      problems.emplace_back(e.what());
    }
  }
  if (tuning.trials > 0 && model.kind == ModelKind::kBpr) {
    try {
      tuning.bpr_space.Validate();
    } catch (const UsageError& e) {
      problems.emplace_back(e.what());
    }
  }
  return problems;
}

SweepTrainingSet BuildSweepTrainingSet(const Dataset& d, const Split& leave_one_out, const SweepConfig& cfg,
                                       int future_windows) {
  if (leave_one_out.strategy != SplitStrategy::kLeaveOneOut) throw UsageError("sweep needs a leave-one-out split");
  std::vector<bool> is_test(d.size(), false);
  for (auto t : leave_one_out.test) is_test[t] = true;
  const int last_window = cfg.test_window + future_windows;
  SweepTrainingSet set;
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    const int w = WindowOf(d, d[i].timestamp, cfg.window_length);
    if (w == cfg.test_window && is_test[i]) {
      set.test.push_back(i);
    } else if (w <= last_window) {
      set.train.push_back(i);
    }
  }
  if (set.test.empty()) {
    throw UsageError("no test instance falls in window " + std::to_string(cfg.test_window));
  }
  return set;
}

const RunResult& SweepReport::Run(int future_windows, std::uint64_t seed) const {
  for (const auto& r : runs) {
    if (r.future_windows == future_windows && r.seed == seed) return r;
  }
  throw UsageError("no run for future_windows=" + std::to_string(future_windows) + " seed=" + std::to_string(seed));
}

RunsPerInstance SweepReport::ListsFor(int future_windows) const {
  RunsPerInstance out;
  for (const auto& r : runs) {
    if (r.future_windows != future_windows) continue;
    if (out.empty()) out.resize(r.instances.size());
    for (std::size_t t = 0; t < r.instances.size(); ++t) out[t].push_back(r.instances[t].list);
  }
  if (out.empty()) throw UsageError("no runs for future_windows=" + std::to_string(future_windows));
  return out;
}

void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SweepReport RunSweep(const Dataset& d, const SweepConfig& cfg) {
  if (const auto problems = cfg.Problems(d); !problems.empty()) {
    std::string msg = "invalid sweep config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw UsageError(msg);
  }
  const auto loo = SplitLeaveOneOut(d, false);
  const auto release = ReleaseTimes(d);

  struct Config {
    int future_windows;
    SweepTrainingSet set;
    ModelSpec spec;
  };
  std::vector<Config> configs;
  for (int f = cfg.future_from; f <= cfg.future_to; ++f) {
    Config c{f, BuildSweepTrainingSet(d, loo, cfg, f), cfg.model};
    if (cfg.tuning.trials > 0) {
      c.spec = (cfg.tuning.freeze_at_reference && !configs.empty()) ? configs.front().spec : TunedSpec(d, cfg, c.set);
    }
    spdlog::info("sweep {}: future_windows={} train={} test={}", cfg.Label(), f, c.set.train.size(), c.set.test.size());
    configs.push_back(std::move(c));
  }

  const std::size_t per_config = cfg.seeds.size();
  std::vector<RunResult> runs(configs.size() * per_config);
  ParallelFor(runs.size(), cfg.jobs, [&](std::size_t k) {
    const auto& c = configs[k / per_config];
    const auto seed = cfg.seeds[k % per_config];
    try {
      runs[k] = ExecuteRun(d, cfg, c.spec, c.set, release, c.future_windows, seed);
    } catch (const std::exception& e) {
      throw RuntimeFailure("run " + cfg.Label() + " future_windows=" + std::to_string(c.future_windows) +
                           " seed=" + std::to_string(seed) + " failed: " + e.what());
    }
  });

  SweepReport report;
  report.model = cfg.Label();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    WindowSummary w;
    w.future_windows = configs[c].future_windows;
    w.train_size = configs[c].set.train.size();
    w.test_size = configs[c].set.test.size();
    w.seeds = per_config;
    for (std::size_t s = 0; s < per_config; ++s) {
      const auto& r = runs[c * per_config + s];
      w.mean_hr += r.accuracy.hr;
      w.mean_ndcg += r.accuracy.ndcg;
      w.total_future_items += r.future_item_total;
    }
    w.mean_hr /= static_cast<double>(per_config);
    w.mean_ndcg /= static_cast<double>(per_config);
    report.windows.push_back(w);
  }
  report.runs = std::move(runs);
  return report;
}

SimilarityAnalysis AnalyzeSimilarity(const SweepReport& reference, int reference_windows, const SweepReport& compared,
                                     int compared_windows) {
  const auto ref_lists = reference.ListsFor(reference_windows);
  const auto cmp_lists = compared.ListsFor(compared_windows);
  if (ref_lists.size() != cmp_lists.size()) throw UsageError("similarity analysis over mismatched test sets");
  const auto& ref_run = *std::find_if(reference.runs.begin(), reference.runs.end(),
                                      [&](const RunResult& r) { return r.future_windows == reference_windows; });
  const auto& cmp_run = *std::find_if(compared.runs.begin(), compared.runs.end(),
                                      [&](const RunResult& r) { return r.future_windows == compared_windows; });
  for (std::size_t t = 0; t < ref_run.instances.size(); ++t) {
    if (ref_run.instances[t].test != cmp_run.instances[t].test) {
      throw UsageError("similarity analysis over mismatched test sets");
    }
  }
  const std::size_t runs = ref_lists.empty() ? 0 : ref_lists.front().size();
  if (!cmp_lists.empty() && cmp_lists.front().size() != runs) {
    throw UsageError("similarity analysis needs the same number of seeds on both sides");
  }
  SimilarityAnalysis out;
  out.reference_windows = reference_windows;
  out.compared_windows = compared_windows;
  out.intrinsic_reference = IntrinsicSimilarity(ref_lists, runs);
  out.intrinsic_compared = IntrinsicSimilarity(cmp_lists, runs);
  out.extrinsic = ExtrinsicSimilarity(ref_lists, cmp_lists, runs);
  return out;
}

}  // namespace leakproof
