#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakproof/corpus.hpp"
#include "leakproof/summary.hpp"
#include "leakproof/sweep.hpp"
#include "leakproof/timeline.hpp"

namespace leakproof {

std::string_view Version();

/// printf "%.10g", used for every floating-point cell.
std::string FormatDouble(double value);

// Report files. Users and items are written with their external identifiers;
// list cells hold space-separated item identifiers in rank order.
//
//   metrics.csv        experiment,model,future_windows,seed,test_index,user,target,hr,ndcg,future_item_count
//   lists.csv          experiment,model,future_windows,seed,test_index,user,asof,fallback,items
//   runs.csv           experiment,model,future_windows,seed,train_size,test_size,hr,ndcg,future_item_count,params
//   sweep_summary.csv  model,future_windows,train_size,test_size,seeds,mean_hr,mean_ndcg,total_future_items
//   similarity.csv     kind,future_windows,test_index,value
//   changes.csv        model,min_hr_change,max_hr_change,min_ndcg_change,max_ndcg_change
//   ranks.csv          future_windows,model,hr,rank
//   timeline.csv       mode,test_index,user,target,asof,hr,ndcg,future_item_count,consumed,max_consumed,violation
//   timeline_lists.csv mode,test_index,user,asof,fallback,items
void WriteSweepReport(const Dataset& d, const SweepReport& report, std::string_view experiment,
                      const std::filesystem::path& dir);

void WriteSweepSummaries(std::span<const SweepSummary> summaries, const std::filesystem::path& path);
/// Reads one or more sweep_summary.csv files; rows are grouped by model in first-seen order.
std::vector<SweepSummary> ReadSweepSummaries(std::span<const std::filesystem::path> paths);

/// Intrinsic rows are written once per distinct future_windows value.
void WriteSimilarity(std::span<const SimilarityAnalysis> analyses, const std::filesystem::path& path);
void WriteSummaryTables(const SummaryTables& tables, const std::filesystem::path& dir);
void WriteTimelineReport(const Dataset& d, const TimelineReport& report, const std::filesystem::path& dir);

/// Provenance of one command invocation.
struct RunManifest {
  std::string command;
  std::string config_hash;          ///< sha256 of the config text, or of the flag set
  std::string dataset_fingerprint;  ///< see Fingerprint()
  std::vector<std::uint64_t> seeds;
  std::map<std::string, double> timings;  ///< seconds
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json ToJson() const;
};

void WriteManifest(const RunManifest& manifest, const std::filesystem::path& path);

/// Minimal header-aware CSV reader for the files above (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws UsageError naming the column when absent.
  std::size_t Column(std::string_view name) const;
};

CsvTable ReadCsv(const std::filesystem::path& path);

}  // namespace leakproof
