#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakproof/types.hpp"

namespace leakproof {

/// First and last interaction time of a user or item.
struct ActiveSpan {
  Timestamp first = 0;
  Timestamp last = 0;
};

/// A row of the raw log before identifiers are interned.
struct RawInteraction {
  std::string user;
  std::string item;
  Timestamp timestamp = 0;
};

/// Natural ordering for external identifiers: all-digit strings compare
/// numerically, anything else lexicographically (digits before the rest).
bool NaturalIdLess(std::string_view a, std::string_view b);

// Immutable, chronologically sorted interaction log.
//
// Interactions are ordered by (timestamp, input order). User and item ids are
// dense and follow the natural order of the external identifiers. Release time,
// spans and counts are derived once at construction, so a Dataset can be shared
// freely between threads.
class Dataset {
 public:
  Dataset() = default;

  /// Interns identifiers and stable-sorts rows by timestamp.
  static Dataset FromRaw(std::span<const RawInteraction> rows);

  /// Rows given by index, keeping their relative order and compacting ids.
  Dataset Subset(std::span<const InteractionIndex> keep) const;

  const std::vector<Interaction>& interactions() const { return interactions_; }
  const Interaction& operator[](InteractionIndex i) const { return interactions_[i]; }
  std::size_t size() const { return interactions_.size(); }
  bool empty() const { return interactions_.empty(); }

  std::size_t n_users() const { return user_names_.size(); }
  std::size_t n_items() const { return item_names_.size(); }

  const std::string& user_name(UserId u) const { return user_names_[u.value]; }
  const std::string& item_name(ItemId i) const { return item_names_[i.value]; }
  std::optional<UserId> FindUser(std::string_view name) const;
  std::optional<ItemId> FindItem(std::string_view name) const;

  /// Timestamp of the item's first interaction by any user.
  Timestamp release_time(ItemId i) const { return item_span_[i.value].first; }
  const std::vector<ActiveSpan>& item_spans() const { return item_span_; }
  const std::vector<ActiveSpan>& user_spans() const { return user_span_; }
  ActiveSpan user_span(UserId u) const { return user_span_[u.value]; }
  ActiveSpan item_span(ItemId i) const { return item_span_[i.value]; }

  Timestamp t_start() const { return t_start_; }
  Timestamp t_end() const { return t_end_; }

 private:
  Dataset(std::vector<std::string> users, std::vector<std::string> items, std::vector<Interaction> rows);

  std::vector<std::string> user_names_;
  std::vector<std::string> item_names_;
  std::vector<Interaction> interactions_;
  std::vector<ActiveSpan> user_span_;
  std::vector<ActiveSpan> item_span_;
  Timestamp t_start_ = 0;
  Timestamp t_end_ = 0;
};

/// Column mapping of a delimiter-separated interaction file.
struct Schema {
  int user_column = 0;
  int item_column = 1;
  int rating_column = 2;  ///< -1 when the file has no rating column; always ignored
  int timestamp_column = 3;
  char delimiter = ',';
  bool header = false;

  /// Parses "U:I:R:T" column indices; R may be "-" for no rating column.
  static Schema Parse(std::string_view spec);
  std::string ToString() const;
};

struct RowDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct IngestResult {
  Dataset dataset;
  std::size_t rows_read = 0;
  std::vector<RowDiagnostic> rejected;
};

/// Thrown when nothing usable could be read; carries the per-line reasons.
class IngestError : public UsageError {
 public:
  IngestError(const std::string& what, std::vector<RowDiagnostic> diagnostics)
      : UsageError(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<RowDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<RowDiagnostic> diagnostics_;
};

/// Reads a log; malformed rows are skipped and reported with line numbers.
IngestResult Ingest(const std::filesystem::path& source, const Schema& schema);
IngestResult Ingest(std::istream& in, const Schema& schema);

enum class DedupMode { kExactTriple, kEarliestPerPair };

Dataset Deduplicate(const Dataset& d, DedupMode mode = DedupMode::kExactTriple);

/// Keeps start <= t < start + duration, then drops every user whose first
/// interaction in `d` is earlier than start + grace.
Dataset SelectTimeSpan(const Dataset& d, Timestamp start, Timestamp duration, Timestamp grace = kSecondsPerDay);

/// Iteratively removes users and items with fewer than k interactions.
/// The result may be empty.
Dataset KCoreFilter(const Dataset& d, int k);

struct ActivePeriodStats {
  double mean_user_days = 0;
  double median_user_days = 0;
  double mean_item_days = 0;
  double median_item_days = 0;
};

ActivePeriodStats ComputeActivePeriods(const Dataset& d);

struct WeekBucket {
  std::size_t item_releases = 0;
  std::size_t user_last_interactions = 0;
};

/// Weekly item releases and users' last interactions, week 0 starting at t_start.
std::vector<WeekBucket> WeeklySeries(const Dataset& d);

/// Interaction counts of `item` per consecutive window from t_start.
std::vector<std::size_t> WindowPopularity(const Dataset& d, ItemId item, Timestamp window = kSecondsPerYear);

/// Writes "user<delim>item<delim>timestamp" rows in dataset order.
void WriteProcessed(const Dataset& d, const std::filesystem::path& path, char delimiter = ',');

/// Schema matching WriteProcessed output.
Schema ProcessedSchema(char delimiter = ',');

nlohmann::json StatsJson(const Dataset& d);

/// "<rows>:<sha256 hex>" over the processed rows.
std::string Fingerprint(const Dataset& d);

/// Lowercase hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

}  // namespace leakproof
