#include "leakproof/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef LEAKPROOF_VERSION_STRING
#define LEAKPROOF_VERSION_STRING "0.0.0"
#endif

namespace leakproof {
namespace {

std::ofstream OpenOut(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  return out;
}

std::string Items(const Dataset& d, const RecommendationList& list) {
  std::string out;
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    if (i) out += ' ';
    out += d.item_name(list.items[i]);
  }
  return out;
}

std::vector<std::string> SplitCells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
T ParseCell(const std::string& text, const std::filesystem::path& path, std::string_view column) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) {
    throw UsageError(path.string() + ": column '" + std::string(column) + "' has non-numeric value '" + text + "'");
  }
  return value;
}

}  // namespace

std::string_view Version() { return LEAKPROOF_VERSION_STRING; }

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void WriteSweepReport(const Dataset& d, const SweepReport& report, std::string_view experiment,
                      const std::filesystem::path& dir) {
  auto metrics = OpenOut(dir / "metrics.csv");
  auto lists = OpenOut(dir / "lists.csv");
  auto runs = OpenOut(dir / "runs.csv");
  metrics << "experiment,model,future_windows,seed,test_index,user,target,hr,ndcg,future_item_count\n";
  lists << "experiment,model,future_windows,seed,test_index,user,asof,fallback,items\n";
  runs << "experiment,model,future_windows,seed,train_size,test_size,hr,ndcg,future_item_count,params\n";
  for (const auto& run : report.runs) {
    const std::string prefix = std::string(experiment) + "," + report.model + "," +
                               std::to_string(run.future_windows) + "," + std::to_string(run.seed) + ",";
    for (const auto& inst : run.instances) {
      metrics << prefix << inst.test << ',' << d.user_name(inst.user) << ',' << d.item_name(inst.target) << ','
              << inst.hit << ',' << FormatDouble(inst.ndcg) << ',' << inst.future_items << '\n';
      lists << prefix << inst.test << ',' << d.user_name(inst.user) << ',' << inst.asof << ','
            << (inst.list.fallback ? 1 : 0) << ',' << Items(d, inst.list) << '\n';
    }
    // Params are JSON; commas are replaced so the row stays a plain CSV record.
    std::string params = run.params.dump();
    for (auto& c : params) {
      if (c == ',') c = ';';
    }
    runs << prefix << run.train_size << ',' << run.instances.size() << ',' << FormatDouble(run.accuracy.hr) << ','
         << FormatDouble(run.accuracy.ndcg) << ',' << run.future_item_total << ',' << params << '\n';
  }
  const SweepSummary summary = Summarise(report);
  WriteSweepSummaries(std::span(&summary, 1), dir / "sweep_summary.csv");
}

void WriteSweepSummaries(std::span<const SweepSummary> summaries, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << "model,future_windows,train_size,test_size,seeds,mean_hr,mean_ndcg,total_future_items\n";
  for (const auto& s : summaries) {
    for (const auto& w : s.windows) {
      out << s.model << ',' << w.future_windows << ',' << w.train_size << ',' << w.test_size << ',' << w.seeds << ','
          << FormatDouble(w.mean_hr) << ',' << FormatDouble(w.mean_ndcg) << ',' << w.total_future_items << '\n';
    }
  }
}

std::vector<SweepSummary> ReadSweepSummaries(std::span<const std::filesystem::path> paths) {
  std::vector<SweepSummary> out;
  for (const auto& path : paths) {
    const auto table = ReadCsv(path);
    const auto c_model = table.Column("model");
    const auto c_fw = table.Column("future_windows");
    const auto c_train = table.Column("train_size");
    const auto c_test = table.Column("test_size");
    const auto c_seeds = table.Column("seeds");
    const auto c_hr = table.Column("mean_hr");
    const auto c_ndcg = table.Column("mean_ndcg");
    const auto c_future = table.Column("total_future_items");
    for (const auto& row : table.rows) {
      const auto& model = row[c_model];
      auto it = std::find_if(out.begin(), out.end(), [&](const SweepSummary& s) { return s.model == model; });
      if (it == out.end()) {
        out.push_back({model, {}});
        it = std::prev(out.end());
      }
      WindowSummary w;
      w.future_windows = ParseCell<int>(row[c_fw], path, "future_windows");
      w.train_size = ParseCell<std::size_t>(row[c_train], path, "train_size");
      w.test_size = ParseCell<std::size_t>(row[c_test], path, "test_size");
      w.seeds = ParseCell<std::size_t>(row[c_seeds], path, "seeds");
      w.mean_hr = ParseCell<double>(row[c_hr], path, "mean_hr");
      w.mean_ndcg = ParseCell<double>(row[c_ndcg], path, "mean_ndcg");
      w.total_future_items = ParseCell<std::size_t>(row[c_future], path, "total_future_items");
      it->windows.push_back(w);
    }
  }
  return out;
}

void WriteSimilarity(std::span<const SimilarityAnalysis> analyses, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << "kind,future_windows,test_index,value\n";
  const auto emit = [&](std::string_view kind, int windows, const SimilarityDistribution& dist) {
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
      out << kind << ',' << windows << ',' << i << ',' << FormatDouble(dist.values[i]) << '\n';
    }
  };
  std::vector<int> written;
  const auto intrinsic = [&](int windows, const SimilarityDistribution& dist) {
    if (std::find(written.begin(), written.end(), windows) != written.end()) return;
    written.push_back(windows);
    emit("intrinsic", windows, dist);
  };
  for (const auto& a : analyses) {
    intrinsic(a.reference_windows, a.intrinsic_reference);
    intrinsic(a.compared_windows, a.intrinsic_compared);
  }
  for (const auto& a : analyses) {
    if (a.compared_windows != a.reference_windows) emit("extrinsic", a.compared_windows, a.extrinsic);
  }
}

void WriteSummaryTables(const SummaryTables& tables, const std::filesystem::path& dir) {
  auto changes = OpenOut(dir / "changes.csv");
  changes << "model,min_hr_change,max_hr_change,min_ndcg_change,max_ndcg_change\n";
  for (const auto& c : tables.changes) {
    changes << c.model;
    if (c.empty) {
      changes << ",,,,\n";
    } else {
      changes << ',' << FormatDouble(c.min_hr) << ',' << FormatDouble(c.max_hr) << ',' << FormatDouble(c.min_ndcg)
              << ',' << FormatDouble(c.max_ndcg) << '\n';
    }
  }
  auto ranks = OpenOut(dir / "ranks.csv");
  ranks << "future_windows,model,hr,rank\n";
  for (const auto& table : tables.ranks) {
    for (const auto& r : table.ranks) {
      ranks << table.future_windows << ',' << r.model << ',' << FormatDouble(r.score) << ',' << r.rank << '\n';
    }
  }
}

void WriteTimelineReport(const Dataset& d, const TimelineReport& report, const std::filesystem::path& dir) {
  auto rows = OpenOut(dir / "timeline.csv");
  auto lists = OpenOut(dir / "timeline_lists.csv");
  rows << "mode,test_index,user,target,asof,hr,ndcg,future_item_count,consumed,max_consumed,violation\n";
  lists << "mode,test_index,user,asof,fallback,items\n";
  const auto mode = ToString(report.mode);
  for (const auto& r : report.rows) {
    rows << mode << ',' << r.index << ',' << d.user_name(r.user) << ',' << d.item_name(r.target) << ',' << r.asof
         << ',' << r.hit << ',' << FormatDouble(r.ndcg) << ',' << r.future_items << ',' << r.consumed << ',';
    if (r.max_consumed) rows << *r.max_consumed;
    rows << ',' << (r.violation ? 1 : 0) << '\n';
    lists << mode << ',' << r.index << ',' << d.user_name(r.user) << ',' << r.asof << ',' << (r.list.fallback ? 1 : 0)
          << ',' << Items(d, r.list) << '\n';
  }
}

nlohmann::json RunManifest::ToJson() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["dataset_fingerprint"] = dataset_fingerprint;
  j["seeds"] = seeds;
  j["version"] = std::string(Version());
  j["timings"] = timings;
  j["details"] = details;
  return j;
}

void WriteManifest(const RunManifest& manifest, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << manifest.ToJson().dump(2) << '\n';
}

std::size_t CsvTable::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw UsageError("missing column '" + std::string(name) + "'");
}

CsvTable ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = SplitCells(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = SplitCells(line);
    if (cells.size() != table.header.size()) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace leakproof
