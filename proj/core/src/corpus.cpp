#include "leakproof/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

namespace leakproof {
namespace {

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view StripZeros(std::string_view s) {
  const auto pos = s.find_first_not_of('0');
  return pos == std::string_view::npos ? std::string_view("0") : s.substr(pos);
}

// Interns a set of names in natural order; returns the sorted names and a lookup.
std::vector<std::string> SortedNames(std::unordered_set<std::string> names) {
  std::vector<std::string> sorted(std::make_move_iterator(names.begin()), std::make_move_iterator(names.end()));
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return NaturalIdLess(a, b); });
  return sorted;
}

template <typename Id>
std::optional<Id> FindName(const std::vector<std::string>& sorted, std::string_view name) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), name,
                             [](const std::string& a, std::string_view b) { return NaturalIdLess(a, b); });
  if (it == sorted.end() || *it != name) return std::nullopt;
  return Id{static_cast<std::uint32_t>(it - sorted.begin())};
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<std::string_view> SplitFields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const auto end = line.find(delimiter, begin);
    fields.push_back(line.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

}  // namespace

bool NaturalIdLess(std::string_view a, std::string_view b) {
  const bool da = AllDigits(a);
  const bool db = AllDigits(b);
  if (da && db) {
    const auto na = StripZeros(a);
    const auto nb = StripZeros(b);
    if (na.size() != nb.size()) return na.size() < nb.size();
    if (na != nb) return na < nb;
    return a < b;
  }
  if (da != db) return da;
  return a < b;
}

Dataset::Dataset(std::vector<std::string> users, std::vector<std::string> items, std::vector<Interaction> rows)
    : user_names_(std::move(users)), item_names_(std::move(items)), interactions_(std::move(rows)) {
  user_span_.assign(user_names_.size(), ActiveSpan{INT64_MAX, INT64_MIN});
  item_span_.assign(item_names_.size(), ActiveSpan{INT64_MAX, INT64_MIN});
  for (const auto& x : interactions_) {
    auto& us = user_span_[x.user.value];
    us.first = std::min(us.first, x.timestamp);
    us.last = std::max(us.last, x.timestamp);
    auto& is = item_span_[x.item.value];
    is.first = std::min(is.first, x.timestamp);
    is.last = std::max(is.last, x.timestamp);
  }
  if (!interactions_.empty()) {
    t_start_ = interactions_.front().timestamp;
    t_end_ = interactions_.back().timestamp;
  }
}

Dataset Dataset::FromRaw(std::span<const RawInteraction> rows) {
  std::unordered_set<std::string> user_set;
  std::unordered_set<std::string> item_set;
  for (const auto& r : rows) {
    user_set.insert(r.user);
    item_set.insert(r.item);
  }
  auto users = SortedNames(std::move(user_set));
  auto items = SortedNames(std::move(item_set));

  std::unordered_map<std::string_view, std::uint32_t> user_index;
  std::unordered_map<std::string_view, std::uint32_t> item_index;
  for (std::uint32_t i = 0; i < users.size(); ++i) user_index.emplace(users[i], i);
  for (std::uint32_t i = 0; i < items.size(); ++i) item_index.emplace(items[i], i);

  std::vector<Interaction> interactions;
  interactions.reserve(rows.size());
  for (const auto& r : rows) {
    interactions.push_back({UserId{user_index.at(r.user)}, ItemId{item_index.at(r.item)}, r.timestamp});
  }
  std::stable_sort(interactions.begin(), interactions.end(),
                   [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; });
  return Dataset(std::move(users), std::move(items), std::move(interactions));
}

Dataset Dataset::Subset(std::span<const InteractionIndex> keep) const {
  std::vector<std::int64_t> user_map(n_users(), -1);
  std::vector<std::int64_t> item_map(n_items(), -1);
  for (auto idx : keep) {
    user_map[interactions_[idx].user.value] = 0;
    item_map[interactions_[idx].item.value] = 0;
  }
  std::vector<std::string> users;
  std::vector<std::string> items;
  for (std::size_t u = 0; u < user_map.size(); ++u) {
    if (user_map[u] < 0) continue;
    user_map[u] = static_cast<std::int64_t>(users.size());
    users.push_back(user_names_[u]);
  }
  for (std::size_t i = 0; i < item_map.size(); ++i) {
    if (item_map[i] < 0) continue;
    item_map[i] = static_cast<std::int64_t>(items.size());
    items.push_back(item_names_[i]);
  }
  std::vector<Interaction> rows;
  rows.reserve(keep.size());
  for (auto idx : keep) {
    const auto& x = interactions_[idx];
    rows.push_back({UserId{static_cast<std::uint32_t>(user_map[x.user.value])},
                    ItemId{static_cast<std::uint32_t>(item_map[x.item.value])}, x.timestamp});
  }
  return Dataset(std::move(users), std::move(items), std::move(rows));
}

std::optional<UserId> Dataset::FindUser(std::string_view name) const { return FindName<UserId>(user_names_, name); }

std::optional<ItemId> Dataset::FindItem(std::string_view name) const { return FindName<ItemId>(item_names_, name); }

Schema Schema::Parse(std::string_view spec) {
  const auto parts = SplitFields(spec, ':');
  if (parts.size() != 4) {
    throw UsageError("schema must be USER:ITEM:RATING:TS column indices, got '" + std::string(spec) + "'");
  }
  int cols[4];
  for (int k = 0; k < 4; ++k) {
    const auto p = parts[k];
    if (k == 2 && (p == "-" || p.empty())) {
      cols[k] = -1;
      continue;
    }
    int value = -1;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), value);
    if (ec != std::errc{} || ptr != p.data() + p.size() || value < 0) {
      throw UsageError("schema column '" + std::string(p) + "' is not a non-negative integer");
    }
    cols[k] = value;
  }
  Schema s;
  s.user_column = cols[0];
  s.item_column = cols[1];
  s.rating_column = cols[2];
  s.timestamp_column = cols[3];
  if (s.user_column == s.item_column || s.user_column == s.timestamp_column || s.item_column == s.timestamp_column) {
    throw UsageError("schema columns for user, item and timestamp must differ");
  }
  return s;
}

std::string Schema::ToString() const {
  return std::to_string(user_column) + ":" + std::to_string(item_column) + ":" +
         (rating_column < 0 ? std::string("-") : std::to_string(rating_column)) + ":" +
         std::to_string(timestamp_column);
}

IngestResult Ingest(const std::filesystem::path& source, const Schema& schema) {
  std::ifstream in(source);
  if (!in) throw RuntimeFailure("cannot read interaction file '" + source.string() + "'");
  return Ingest(in, schema);
}

IngestResult Ingest(std::istream& in, const Schema& schema) {
  const int needed = std::max({schema.user_column, schema.item_column, schema.timestamp_column}) + 1;
  IngestResult result;
  std::vector<RawInteraction> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && schema.header) continue;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    ++result.rows_read;
    const auto fields = SplitFields(view, schema.delimiter);
    if (static_cast<int>(fields.size()) < needed) {
      result.rejected.push_back({line_no, "expected at least " + std::to_string(needed) + " columns, found " +
                                              std::to_string(fields.size())});
      continue;
    }
    const auto user = Trim(fields[schema.user_column]);
    const auto item = Trim(fields[schema.item_column]);
    const auto ts_text = Trim(fields[schema.timestamp_column]);
    if (user.empty() || item.empty()) {
      result.rejected.push_back({line_no, "empty user or item identifier"});
      continue;
    }
    Timestamp ts = 0;
    auto [ptr, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
    if (ec != std::errc{} || ptr != ts_text.data() + ts_text.size()) {
      result.rejected.push_back({line_no, "timestamp '" + std::string(ts_text) + "' is not an integer"});
      continue;
    }
    if (ts < 0) {
      result.rejected.push_back({line_no, "negative timestamp"});
      continue;
    }
    rows.push_back({std::string(user), std::string(item), ts});
  }
  if (rows.empty()) throw IngestError("zero valid rows", std::move(result.rejected));
  if (!result.rejected.empty()) {
    spdlog::warn("ingest: {} malformed row(s) skipped, first at line {}: {}", result.rejected.size(),
                 result.rejected.front().line, result.rejected.front().message);
  }
  result.dataset = Dataset::FromRaw(rows);
  return result;
}

Dataset Deduplicate(const Dataset& d, DedupMode mode) {
  std::vector<InteractionIndex> keep;
  keep.reserve(d.size());
  if (mode == DedupMode::kExactTriple) {
    std::set<std::tuple<std::uint32_t, std::uint32_t, Timestamp>> seen;
    for (InteractionIndex i = 0; i < d.size(); ++i) {
      const auto& x = d[i];
      if (seen.emplace(x.user.value, x.item.value, x.timestamp).second) keep.push_back(i);
    }
  } else {
    std::unordered_set<std::uint64_t> seen;
    for (InteractionIndex i = 0; i < d.size(); ++i) {
      const auto& x = d[i];
      const std::uint64_t key = (std::uint64_t{x.user.value} << 32) | x.item.value;
      if (seen.insert(key).second) keep.push_back(i);
    }
  }
  if (keep.size() != d.size()) spdlog::info("deduplicate: removed {} interaction(s)", d.size() - keep.size());
  return d.Subset(keep);
}

Dataset SelectTimeSpan(const Dataset& d, Timestamp start, Timestamp duration, Timestamp grace) {
  if (duration <= 0) throw UsageError("time span duration must be positive");
  const Timestamp end = start + duration;
  const Timestamp cutoff = start + grace;
  std::vector<InteractionIndex> keep;
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    const auto& x = d[i];
    if (x.timestamp < start || x.timestamp >= end) continue;
    if (d.user_span(x.user).first < cutoff) continue;
    keep.push_back(i);
  }
  if (keep.empty()) throw UsageError("resulting dataset empty");
  return d.Subset(keep);
}

Dataset KCoreFilter(const Dataset& d, int k) {
  if (k < 1) throw UsageError("k-core requires k >= 1");
  const auto& rows = d.interactions();
  std::vector<std::vector<InteractionIndex>> by_user(d.n_users());
  std::vector<std::vector<InteractionIndex>> by_item(d.n_items());
  for (InteractionIndex i = 0; i < rows.size(); ++i) {
    by_user[rows[i].user.value].push_back(i);
    by_item[rows[i].item.value].push_back(i);
  }
  std::vector<std::size_t> user_degree(d.n_users());
  std::vector<std::size_t> item_degree(d.n_items());
  for (std::size_t u = 0; u < by_user.size(); ++u) user_degree[u] = by_user[u].size();
  for (std::size_t i = 0; i < by_item.size(); ++i) item_degree[i] = by_item[i].size();

  const auto threshold = static_cast<std::size_t>(k);
  std::vector<bool> alive(rows.size(), true);
  std::vector<bool> user_gone(d.n_users(), false);
  std::vector<bool> item_gone(d.n_items(), false);
  // Negative entries encode items as ~index.
  std::vector<std::int64_t> queue;
  for (std::size_t u = 0; u < user_degree.size(); ++u) {
    if (user_degree[u] < threshold) queue.push_back(static_cast<std::int64_t>(u));
  }
  for (std::size_t i = 0; i < item_degree.size(); ++i) {
    if (item_degree[i] < threshold) queue.push_back(~static_cast<std::int64_t>(i));
  }
  while (!queue.empty()) {
    const auto entry = queue.back();
    queue.pop_back();
    if (entry >= 0) {
      const auto u = static_cast<std::size_t>(entry);
      if (user_gone[u]) continue;
      user_gone[u] = true;
      for (auto e : by_user[u]) {
        if (!alive[e]) continue;
        alive[e] = false;
        const auto item = rows[e].item.value;
        if (!item_gone[item] && --item_degree[item] < threshold) queue.push_back(~static_cast<std::int64_t>(item));
      }
    } else {
      const auto item = static_cast<std::size_t>(~entry);
      if (item_gone[item]) continue;
      item_gone[item] = true;
      for (auto e : by_item[item]) {
        if (!alive[e]) continue;
        alive[e] = false;
        const auto u = rows[e].user.value;
        if (!user_gone[u] && --user_degree[u] < threshold) queue.push_back(static_cast<std::int64_t>(u));
      }
    }
  }
  std::vector<InteractionIndex> keep;
  for (InteractionIndex i = 0; i < rows.size(); ++i) {
    if (alive[i]) keep.push_back(i);
  }
  if (keep.empty() && !d.empty()) spdlog::warn("{}-core filter removed every interaction", k);
  return d.Subset(keep);
}

ActivePeriodStats ComputeActivePeriods(const Dataset& d) {
  auto days = [](const std::vector<ActiveSpan>& spans) {
    std::vector<double> out;
    out.reserve(spans.size());
    for (const auto& s : spans) out.push_back(static_cast<double>(s.last - s.first) / kSecondsPerDay);
    return out;
  };
  const auto users = days(d.user_spans());
  const auto items = days(d.item_spans());
  return {Mean(users), Median(users), Mean(items), Median(items)};
}

std::vector<WeekBucket> WeeklySeries(const Dataset& d) {
  if (d.empty()) return {};
  const auto weeks = static_cast<std::size_t>((d.t_end() - d.t_start()) / kSecondsPerWeek) + 1;
  std::vector<WeekBucket> series(weeks);
  for (const auto& s : d.item_spans()) ++series[(s.first - d.t_start()) / kSecondsPerWeek].item_releases;
  for (const auto& s : d.user_spans()) ++series[(s.last - d.t_start()) / kSecondsPerWeek].user_last_interactions;
  return series;
}

std::vector<std::size_t> WindowPopularity(const Dataset& d, ItemId item, Timestamp window) {
  if (window <= 0) throw UsageError("window length must be positive");
  if (item.value >= d.n_items()) throw UsageError("unknown item");
  const auto windows = static_cast<std::size_t>((d.t_end() - d.t_start()) / window) + 1;
  std::vector<std::size_t> counts(windows, 0);
  for (const auto& x : d.interactions()) {
    if (x.item == item) ++counts[(x.timestamp - d.t_start()) / window];
  }
  return counts;
}

void WriteProcessed(const Dataset& d, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  for (const auto& x : d.interactions()) {
    out << d.user_name(x.user) << delimiter << d.item_name(x.item) << delimiter << x.timestamp << '\n';
  }
  if (!out) throw RuntimeFailure("write failed for '" + path.string() + "'");
}

Schema ProcessedSchema(char delimiter) {
  Schema s;
  s.user_column = 0;
  s.item_column = 1;
  s.rating_column = -1;
  s.timestamp_column = 2;
  s.delimiter = delimiter;
  return s;
}

nlohmann::json StatsJson(const Dataset& d) {
  return {{"n_users", d.n_users()},
          {"n_items", d.n_items()},
          {"n_interactions", d.size()},
          {"t_start", d.t_start()},
          {"t_end", d.t_end()}};
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * length);
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string Fingerprint(const Dataset& d) {
  std::string text;
  text.reserve(d.size() * 24);
  for (const auto& x : d.interactions()) {
    text += d.user_name(x.user);
    text += '\t';
    text += d.item_name(x.item);
    text += '\t';
    text += std::to_string(x.timestamp);
    text += '\n';
  }
  return std::to_string(d.size()) + ":" + Sha256Hex(text);
}

}  // namespace leakproof
