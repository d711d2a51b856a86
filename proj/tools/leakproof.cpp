// leakproof: command-line front end.
//
// Exit codes: 0 success, 1 runtime failure (including leakage violations in
// timeline runs), 2 usage or configuration error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "leakproof/config.hpp"
#include "leakproof/corpus.hpp"
#include "leakproof/report_io.hpp"
#include "leakproof/splits.hpp"
#include "leakproof/summary.hpp"
#include "leakproof/sweep.hpp"
#include "leakproof/timeline.hpp"

namespace lp = leakproof;
namespace fs = std::filesystem;

namespace {

constexpr int kUsageExit = 2;
constexpr int kRuntimeExit = 1;

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void SetupLogging() {
  auto logger = spdlog::stderr_color_mt("leakproof");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("LEAKPROOF_LOG")) spdlog::cfg::helpers::load_levels(level);
}

/// Unix seconds, or a UTC calendar date YYYY-MM-DD.
lp::Timestamp ParseTime(const std::string& text) {
  const std::size_t digits_from = !text.empty() && text[0] == '-' ? 1 : 0;
  if (text.size() > digits_from && text.find_first_not_of("0123456789", digits_from) == std::string::npos) {
    return std::stoll(text);
  }
  std::tm tm{};
  std::istringstream in(text);
  in >> std::get_time(&tm, "%Y-%m-%d");
  if (in.fail()) throw lp::UsageError("'" + text + "' is neither unix seconds nor YYYY-MM-DD");
  return static_cast<lp::Timestamp>(timegm(&tm));
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lp::UsageError("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

lp::Dataset LoadDataset(const fs::path& path, const lp::Schema& schema) {
  auto result = lp::Ingest(path, schema);
  if (!result.rejected.empty()) {
    spdlog::warn("{}: skipped {} malformed row(s); first at line {}: {}", path.string(), result.rejected.size(),
                 result.rejected.front().line, result.rejected.front().message);
  }
  return std::move(result.dataset);
}

// Flags shared by the config-driven commands, mapped onto config keys.
struct ConfigFlags {
  std::string config;
  std::map<std::string, std::string> overrides;

  void Bind(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { overrides[key] = v; }, help);
  }

  lp::ExperimentConfig Load() {
    if (auto it = overrides.find("dataset"); it != overrides.end()) {
      it->second = fs::absolute(it->second).string();
    }
    if (config.empty()) return lp::BuildExperimentConfig({}, overrides, fs::current_path());
    return lp::LoadExperimentConfig(config, overrides);
  }

  std::string Hash() const {
    std::string text = config.empty() ? std::string() : ReadFile(config);
    for (const auto& [k, v] : overrides) text += "\n" + k + "=" + v;
    return lp::Sha256Hex(text);
  }
};

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string input;
  std::string schema = "0:1:2:3";
  std::string delimiter = ",";
  bool header = false;
  std::string dedup = "exact";
  std::string span;
  double grace_days = 1.0;
  int k_core = 0;
  std::string out;
};

char ParseDelimiter(const std::string& d) {
  if (d == "tab" || d == "\\t") return '\t';
  if (d.size() != 1) throw lp::UsageError("delimiter must be a single character or 'tab'");
  return d[0];
}

int RunIngest(const IngestArgs& a) {
  auto schema = lp::Schema::Parse(a.schema);
  schema.delimiter = ParseDelimiter(a.delimiter);
  schema.header = a.header;
  auto result = lp::Ingest(a.input, schema);
  for (std::size_t i = 0; i < result.rejected.size() && i < 10; ++i) {
    spdlog::warn("line {}: {}", result.rejected[i].line, result.rejected[i].message);
  }
  if (result.rejected.size() > 10) spdlog::warn("... {} more malformed row(s)", result.rejected.size() - 10);

  lp::Dataset d = std::move(result.dataset);
  nlohmann::json pipeline;
  pipeline["rows_read"] = result.rows_read;
  pipeline["rows_rejected"] = result.rejected.size();
  pipeline["schema"] = schema.ToString();
  if (a.dedup == "exact") {
    d = lp::Deduplicate(d, lp::DedupMode::kExactTriple);
  } else if (a.dedup == "earliest") {
    d = lp::Deduplicate(d, lp::DedupMode::kEarliestPerPair);
  } else if (a.dedup != "none") {
    throw lp::UsageError("--dedup must be none, exact or earliest");
  }
  pipeline["dedup"] = a.dedup;
  pipeline["after_dedup"] = d.size();
  if (!a.span.empty()) {
    const auto colon = a.span.rfind(':');
    if (colon == std::string::npos) throw lp::UsageError("--span must be START:DAYS");
    const auto start = ParseTime(a.span.substr(0, colon));
    const double days = std::stod(a.span.substr(colon + 1));
    const auto duration = static_cast<lp::Timestamp>(days * lp::kSecondsPerDay);
    const auto grace = static_cast<lp::Timestamp>(a.grace_days * lp::kSecondsPerDay);
    d = lp::SelectTimeSpan(d, start, duration, grace);
    pipeline["span_start"] = start;
    pipeline["span_seconds"] = duration;
    pipeline["grace_seconds"] = grace;
    pipeline["after_span"] = d.size();
  }
  if (a.k_core > 0) {
    d = lp::KCoreFilter(d, a.k_core);
    pipeline["k_core"] = a.k_core;
    if (d.empty()) throw lp::RuntimeFailure("k-core filtering removed every interaction");
  }

  auto stats = lp::StatsJson(d);
  stats["fingerprint"] = lp::Fingerprint(d);
  stats["pipeline"] = pipeline;
  if (!a.out.empty()) {
    const fs::path out = a.out;
    lp::WriteProcessed(d, out, schema.delimiter == '\t' ? '\t' : ',');
    fs::path sidecar = out;
    sidecar.replace_extension(".stats.json");
    std::ofstream(sidecar) << stats.dump(2) << '\n';
    spdlog::info("wrote {} and {}", out.string(), sidecar.string());
  }
  std::cout << stats.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string input;
  std::string schema = "0:1:-:2";
  std::string delimiter = ",";
  bool header = false;
  double window_days = 365.0;
  std::size_t top_items = 5;
  std::string out;
};

int RunStats(const StatsArgs& a) {
  auto schema = lp::Schema::Parse(a.schema);
  schema.delimiter = ParseDelimiter(a.delimiter);
  schema.header = a.header;
  const auto d = LoadDataset(a.input, schema);
  if (!(a.window_days > 0)) throw lp::UsageError("--window must be positive");
  const auto window = static_cast<lp::Timestamp>(a.window_days * lp::kSecondsPerDay);

  auto stats = lp::StatsJson(d);
  const auto active = lp::ComputeActivePeriods(d);
  stats["mean_user_active_days"] = active.mean_user_days;
  stats["median_user_active_days"] = active.median_user_days;
  stats["mean_item_active_days"] = active.mean_item_days;
  stats["median_item_active_days"] = active.median_item_days;
  stats["fingerprint"] = lp::Fingerprint(d);
  std::cout << stats.dump(2) << '\n';
  if (a.out.empty()) return 0;

  const fs::path dir = a.out;
  fs::create_directories(dir);
  std::ofstream(dir / "stats.json") << stats.dump(2) << '\n';

  std::ofstream periods(dir / "active_periods.csv");
  periods << "entity,mean_days,median_days\n";
  periods << "user," << lp::FormatDouble(active.mean_user_days) << ',' << lp::FormatDouble(active.median_user_days)
          << '\n';
  periods << "item," << lp::FormatDouble(active.mean_item_days) << ',' << lp::FormatDouble(active.median_item_days)
          << '\n';

  std::ofstream weekly(dir / "weekly.csv");
  weekly << "week,item_releases,user_last_interactions\n";
  const auto series = lp::WeeklySeries(d);
  for (std::size_t w = 0; w < series.size(); ++w) {
    weekly << w << ',' << series[w].item_releases << ',' << series[w].user_last_interactions << '\n';
  }

  // Per-window counts of the most popular items overall.
  std::vector<std::size_t> totals(d.n_items(), 0);
  for (const auto& x : d.interactions()) ++totals[x.item.value];
  std::vector<std::uint32_t> order(d.n_items());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return totals[x] > totals[y]; });
  order.resize(std::min<std::size_t>(order.size(), a.top_items));
  std::ofstream popularity(dir / "popularity.csv");
  popularity << "item,window,count\n";
  for (auto i : order) {
    const auto counts = lp::WindowPopularity(d, lp::ItemId{i}, window);
    for (std::size_t w = 0; w < counts.size(); ++w) {
      popularity << d.item_name(lp::ItemId{i}) << ',' << w << ',' << counts[w] << '\n';
    }
  }
  spdlog::info("wrote statistics to {}", dir.string());
  return 0;
}

// ---------------------------------------------------------------------------

struct AuditArgs {
  std::string input;
  std::string schema = "0:1:-:2";
  std::string delimiter = ",";
  bool header = false;
  std::string split = "leave-one-out";
  double ratio = 0.2;
  std::string timepoint;
  std::uint64_t seed = 0;
  bool validation = false;
  std::string out;
};

int RunAudit(const AuditArgs& a) {
  auto schema = lp::Schema::Parse(a.schema);
  schema.delimiter = ParseDelimiter(a.delimiter);
  schema.header = a.header;
  const auto strategy = lp::ParseSplitStrategy(a.split);
  lp::SplitParams params;
  params.ratio = a.ratio;
  params.seed = a.seed;
  params.with_validation = a.validation;
  if (!a.timepoint.empty()) params.timepoint = ParseTime(a.timepoint);
  if (strategy == lp::SplitStrategy::kByTimepoint && a.timepoint.empty()) {
    throw lp::UsageError("--timepoint is required for the timepoint split");
  }
  const auto d = LoadDataset(a.input, schema);
  const auto split = lp::MakeSplit(d, strategy, params);
  const auto audit = lp::AuditLeakage(d, split);
  auto manifest = lp::SplitManifest(split, audit);
  manifest["dataset_fingerprint"] = lp::Fingerprint(d);
  std::cout << manifest.dump(2) << '\n';
  if (!a.out.empty()) {
    lp::WriteSplit(split, audit, a.out);
    std::ofstream per_test(fs::path(a.out) / "audit.csv");
    per_test << "test_index,user,item,timestamp,future_train_count,future_item_count\n";
    for (const auto& t : audit.per_test) {
      const auto& x = d[t.test];
      per_test << t.test << ',' << d.user_name(x.user) << ',' << d.item_name(x.item) << ',' << x.timestamp << ','
               << t.future_train_count << ',' << t.future_item_count << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

int RunSweepCommand(ConfigFlags& flags, const std::string& out_dir) {
  auto started = Clock::now();
  const auto cfg = flags.Load();
  const auto d = LoadDataset(cfg.dataset, cfg.schema);
  lp::RunManifest manifest;
  manifest.command = "sweep";
  manifest.config_hash = flags.Hash();
  manifest.dataset_fingerprint = lp::Fingerprint(d);
  manifest.seeds = cfg.sweep.seeds;
  manifest.timings["load"] = SecondsSince(started);

  started = Clock::now();
  const auto report = lp::RunSweep(d, cfg.sweep);
  manifest.timings["sweep"] = SecondsSince(started);

  started = Clock::now();
  const fs::path dir = out_dir;
  const std::string experiment = flags.config.empty() ? "sweep" : fs::path(flags.config).stem().string();
  lp::WriteSweepReport(d, report, experiment, dir);
  if (cfg.similarity) {
    std::vector<lp::SimilarityAnalysis> analyses;
    for (int f = cfg.sweep.future_from; f <= cfg.sweep.future_to; ++f) {
      analyses.push_back(lp::AnalyzeSimilarity(report, cfg.sweep.future_from, report, f));
    }
    lp::WriteSimilarity(analyses, dir / "similarity.csv");
    nlohmann::json sim = nlohmann::json::array();
    for (const auto& a : analyses) {
      sim.push_back({{"future_windows", a.compared_windows},
                     {"intrinsic_mean", a.intrinsic_compared.Mean()},
                     {"extrinsic_mean", a.extrinsic.Mean()}});
    }
    manifest.details["similarity"] = sim;
  }
  const auto summary = lp::Summarise(report);
  if (cfg.sweep.future_from == 0) lp::WriteSummaryTables(lp::Summarize(std::span(&summary, 1)), dir);
  manifest.timings["write"] = SecondsSince(started);

  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : report.windows) {
    windows.push_back({{"future_windows", w.future_windows},
                       {"train_size", w.train_size},
                       {"test_size", w.test_size},
                       {"mean_hr", w.mean_hr},
                       {"mean_ndcg", w.mean_ndcg},
                       {"total_future_items", w.total_future_items}});
    std::cout << "future_windows=" << w.future_windows << " train=" << w.train_size << " test=" << w.test_size
              << " HR@" << cfg.sweep.topn << "=" << lp::FormatDouble(w.mean_hr) << " NDCG@" << cfg.sweep.topn << "="
              << lp::FormatDouble(w.mean_ndcg) << " future_items=" << w.total_future_items << '\n';
  }
  manifest.details["model"] = report.model;
  manifest.details["windows"] = windows;
  manifest.details["config"] = cfg.entries;
  lp::WriteManifest(manifest, dir / "manifest.json");
  return 0;
}

int RunTimelineCommand(ConfigFlags& flags, const std::string& out_dir) {
  auto started = Clock::now();
  const auto cfg = flags.Load();
  const auto d = LoadDataset(cfg.dataset, cfg.schema);
  lp::RunManifest manifest;
  manifest.command = "timeline";
  manifest.config_hash = flags.Hash();
  manifest.dataset_fingerprint = lp::Fingerprint(d);
  manifest.seeds = {cfg.timeline_seed};
  manifest.timings["load"] = SecondsSince(started);

  std::vector<lp::InteractionIndex> tests;
  if (cfg.timeline.mode != lp::TimelineMode::kPrequential) {
    tests = lp::MakeSplit(d, cfg.mask_strategy, cfg.mask_params).test;
  }
  started = Clock::now();
  const auto report = lp::RunTimeline(d, tests, cfg.sweep.model, cfg.timeline_seed, cfg.timeline);
  manifest.timings["timeline"] = SecondsSince(started);

  const fs::path dir = out_dir;
  lp::WriteTimelineReport(d, report, dir);
  manifest.details = {{"mode", std::string(lp::ToString(report.mode))},
                      {"model", std::string(lp::ToString(cfg.sweep.model.kind))},
                      {"tests", report.rows.size()},
                      {"skipped", report.skipped},
                      {"refits", report.refits},
                      {"violations", report.violations},
                      {"hr", report.accuracy.hr},
                      {"ndcg", report.accuracy.ndcg},
                      {"config", cfg.entries}};
  lp::WriteManifest(manifest, dir / "manifest.json");

  std::cout << "mode: " << lp::ToString(report.mode) << '\n'
            << "tests: " << report.rows.size() << '\n'
            << "HR@" << cfg.timeline.topn << ": " << lp::FormatDouble(report.accuracy.hr) << '\n'
            << "NDCG@" << cfg.timeline.topn << ": " << lp::FormatDouble(report.accuracy.ndcg) << '\n'
            << "violations: " << report.violations << '\n';
  return report.violations == 0 ? 0 : kRuntimeExit;
}

int RunSummarize(const std::vector<std::string>& inputs, const std::string& out_dir) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  const auto summaries = lp::ReadSweepSummaries(paths);
  const auto tables = lp::Summarize(summaries);
  for (const auto& c : tables.changes) {
    if (c.empty) {
      std::cout << c.model << ": reference config only\n";
    } else {
      std::cout << c.model << ": HR change " << lp::FormatDouble(c.min_hr) << "% .. " << lp::FormatDouble(c.max_hr)
                << "%, NDCG change " << lp::FormatDouble(c.min_ndcg) << "% .. " << lp::FormatDouble(c.max_ndcg)
                << "%\n";
    }
  }
  for (const auto& t : tables.ranks) {
    std::cout << "future_windows=" << t.future_windows << ':';
    for (const auto& r : t.ranks) std::cout << ' ' << r.rank << '.' << r.model;
    std::cout << '\n';
  }
  if (!out_dir.empty()) {
    lp::WriteSummaryTables(tables, out_dir);
    lp::WriteSweepSummaries(summaries, fs::path(out_dir) / "sweep_summary.csv");
  }
  return 0;
}

void AddSchemaFlags(CLI::App* cmd, std::string& input, std::string& schema, std::string& delimiter, bool& header) {
  cmd->add_option("--input,-i", input, "interaction file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--schema", schema, "USER:ITEM:RATING:TS column indices; RATING may be '-'")->capture_default_str();
  cmd->add_option("--delimiter", delimiter, "field delimiter, or 'tab'")->capture_default_str();
  cmd->add_flag("--header", header, "skip the first line");
}

}  // namespace

int main(int argc, char** argv) {
  SetupLogging();
  CLI::App app{"leakage-aware offline evaluation of recommender models", "leakproof"};
  app.set_version_flag("--version", std::string(lp::Version()));
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "parse, clean and filter a raw interaction log");
  AddSchemaFlags(ingest_cmd, ingest.input, ingest.schema, ingest.delimiter, ingest.header);
  ingest_cmd->add_option("--dedup", ingest.dedup, "none | exact (user,item,ts) | earliest (user,item)")
      ->capture_default_str();
  ingest_cmd->add_option("--span", ingest.span, "keep START:DAYS; START is YYYY-MM-DD or unix seconds");
  ingest_cmd->add_option("--grace-days", ingest.grace_days,
                         "with --span, drop users whose first interaction falls in the first DAYS of the span")
      ->capture_default_str();
  ingest_cmd->add_option("--k-core", ingest.k_core, "iterative k-core filter (0 disables)")->capture_default_str();
  ingest_cmd->add_option("--out,-o", ingest.out, "processed file; stats go next to it as .stats.json");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics and figure inputs");
  AddSchemaFlags(stats_cmd, stats.input, stats.schema, stats.delimiter, stats.header);
  stats_cmd->add_option("--window", stats.window_days, "popularity window in days")->capture_default_str();
  stats_cmd->add_option("--top-items", stats.top_items, "items in popularity.csv")->capture_default_str();
  stats_cmd->add_option("--out,-o", stats.out, "output directory");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "build a split and count leaked interactions and items");
  AddSchemaFlags(audit_cmd, audit.input, audit.schema, audit.delimiter, audit.header);
  audit_cmd->add_option("--split", audit.split, "random-ratio | random-user | leave-one-out | timepoint")
      ->capture_default_str();
  audit_cmd->add_option("--ratio", audit.ratio, "test fraction for random splits")->capture_default_str();
  audit_cmd->add_option("--timepoint", audit.timepoint, "YYYY-MM-DD or unix seconds");
  audit_cmd->add_option("--seed", audit.seed, "seed for random splits")->capture_default_str();
  audit_cmd->add_flag("--validation", audit.validation, "leave-one-out: hold out the second-last interaction too");
  audit_cmd->add_option("--out,-o", audit.out, "directory for index lists and split.json");

  ConfigFlags sweep_flags;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "leakage-severity sweep over future windows");
  sweep_cmd->add_option("--config,-c", sweep_flags.config, "experiment configuration file")->check(CLI::ExistingFile);
  sweep_flags.Bind(sweep_cmd, "--input,-i", "dataset", "processed dataset (overrides config)");
  sweep_flags.Bind(sweep_cmd, "--schema", "schema", "USER:ITEM:RATING:TS column indices");
  sweep_flags.Bind(sweep_cmd, "--window", "window_days", "window length in days");
  sweep_flags.Bind(sweep_cmd, "--test-window", "test_window", "index of the test window");
  sweep_flags.Bind(sweep_cmd, "--future", "future", "future window range, e.g. 0..5");
  sweep_flags.Bind(sweep_cmd, "--model", "model", "popularity | itemknn | bpr");
  sweep_flags.Bind(sweep_cmd, "--label", "label", "model name in reports");
  sweep_flags.Bind(sweep_cmd, "--seeds", "seeds", "comma-separated seeds");
  sweep_flags.Bind(sweep_cmd, "--topn", "topn", "list length N");
  sweep_flags.Bind(sweep_cmd, "--jobs", "jobs", "concurrent runs");
  sweep_flags.Bind(sweep_cmd, "--similarity", "similarity", "true to write similarity.csv");
  sweep_cmd->add_option("--out,-o", sweep_out, "report directory")->required();

  ConfigFlags timeline_flags;
  std::string timeline_out;
  auto* timeline_cmd = app.add_subcommand("timeline", "chronological replay with leakage instrumentation");
  timeline_cmd->add_option("--config,-c", timeline_flags.config, "experiment configuration file")
      ->check(CLI::ExistingFile);
  timeline_flags.Bind(timeline_cmd, "--input,-i", "dataset", "processed dataset (overrides config)");
  timeline_flags.Bind(timeline_cmd, "--schema", "schema", "USER:ITEM:RATING:TS column indices");
  timeline_flags.Bind(timeline_cmd, "--mode", "timeline.mode", "timeline | prequential | sliding");
  timeline_flags.Bind(timeline_cmd, "--model", "model", "popularity | itemknn | bpr");
  timeline_flags.Bind(timeline_cmd, "--topn", "topn", "list length N");
  timeline_flags.Bind(timeline_cmd, "--batch", "timeline.batch_size", "events per update() call");
  timeline_flags.Bind(timeline_cmd, "--window", "timeline.window_days", "sliding mode window in days");
  timeline_flags.Bind(timeline_cmd, "--origin", "timeline.origin", "sliding mode first boundary (unix seconds)");
  timeline_flags.Bind(timeline_cmd, "--split", "timeline.split", "strategy choosing the masked test instances");
  timeline_flags.Bind(timeline_cmd, "--timepoint", "timeline.timepoint", "timepoint split boundary (unix seconds)");
  timeline_flags.Bind(timeline_cmd, "--seed", "timeline.seed", "model seed");
  timeline_cmd->add_option("--out,-o", timeline_out, "report directory")->required();

  std::vector<std::string> summarize_inputs;
  std::string summarize_out;
  auto* summarize_cmd = app.add_subcommand("summarize", "percent changes and rank tables from sweep summaries");
  summarize_cmd->add_option("--input,-i", summarize_inputs, "sweep_summary.csv files")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--out,-o", summarize_out, "directory for changes.csv and ranks.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (*ingest_cmd) return RunIngest(ingest);
    if (*stats_cmd) return RunStats(stats);
    if (*audit_cmd) return RunAudit(audit);
    if (*sweep_cmd) return RunSweepCommand(sweep_flags, sweep_out);
    if (*timeline_cmd) return RunTimelineCommand(timeline_flags, timeline_out);
    if (*summarize_cmd) return RunSummarize(summarize_inputs, summarize_out);
  } catch (const lp::IngestError& e) {
    spdlog::error("{}", e.what());
    for (std::size_t i = 0; i < e.diagnostics().size() && i < 20; ++i) {
      spdlog::error("  line {}: {}", e.diagnostics()[i].line, e.diagnostics()[i].message);
    }
    return kUsageExit;
  } catch (const lp::UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsageExit;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeExit;
  }
  return kUsageExit;
}
