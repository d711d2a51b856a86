#include "leakproof/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <spdlog/spdlog.h>

#include "leakproof/rng.hpp"

namespace leakproof {
namespace {

void CheckRatio(double ratio, const char* what) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw UsageError(std::string(what) + " must lie strictly between 0 and 1");
  }
}

void WriteIndexFile(const std::vector<InteractionIndex>& indices, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  for (auto i : indices) out << i << '\n';
}

std::vector<InteractionIndex> ReadIndexFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read '" + path.string() + "'");
  std::vector<InteractionIndex> out;
  InteractionIndex i = 0;
  while (in >> i) out.push_back(i);
  return out;
}

}  // namespace

std::string_view ToString(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::kRandomByRatio:
      return "random-ratio";
    case SplitStrategy::kRandomByUser:
      return "random-user";
    case SplitStrategy::kLeaveOneOut:
      return "leave-one-out";
    case SplitStrategy::kByTimepoint:
      return "timepoint";
  }
  return "unknown";
}

SplitStrategy ParseSplitStrategy(std::string_view name) {
  for (auto s : {SplitStrategy::kRandomByRatio, SplitStrategy::kRandomByUser, SplitStrategy::kLeaveOneOut,
                 SplitStrategy::kByTimepoint}) {
    if (ToString(s) == name) return s;
  }
  throw UsageError("unknown split strategy '" + std::string(name) + "'");
}

Split SplitRandomByRatio(const Dataset& d, double ratio, std::uint64_t seed) {
  CheckRatio(ratio, "ratio");
  Split s;
  s.strategy = SplitStrategy::kRandomByRatio;
  s.params.ratio = ratio;
  s.params.seed = seed;
  const auto n = static_cast<std::uint32_t>(d.size());
  const auto k = static_cast<std::uint32_t>(std::llround(ratio * n));
  Rng rng(seed);
  s.test = rng.SampleWithoutReplacement(n, k);
  std::sort(s.test.begin(), s.test.end());
  std::vector<bool> in_test(n, false);
  for (auto i : s.test) in_test[i] = true;
  for (InteractionIndex i = 0; i < n; ++i) {
    if (!in_test[i]) s.train.push_back(i);
  }
  return s;
}

Split SplitRandomByUser(const Dataset& d, double user_ratio, std::uint64_t seed) {
  CheckRatio(user_ratio, "user ratio");
  if (d.n_users() < 2) throw UsageError("random-by-user split needs at least 2 users");
  Split s;
  s.strategy = SplitStrategy::kRandomByUser;
  s.params.ratio = user_ratio;
  s.params.seed = seed;
  const auto n = static_cast<std::uint32_t>(d.n_users());
  const auto k = static_cast<std::uint32_t>(std::llround(user_ratio * n));
  Rng rng(seed);
  std::vector<bool> test_user(n, false);
  for (auto u : rng.SampleWithoutReplacement(n, k)) test_user[u] = true;
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    (test_user[d[i].user.value] ? s.test : s.train).push_back(i);
  }
  return s;
}

Split SplitLeaveOneOut(const Dataset& d, bool with_validation) {
  Split s;
  s.strategy = SplitStrategy::kLeaveOneOut;
  s.params.with_validation = with_validation;
  // Interactions are sorted by (timestamp, input order), so the last two
  // positions seen per user are the last and second-last interactions.
  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> last(d.n_users(), kNone);
  std::vector<std::int64_t> second(d.n_users(), kNone);
  std::vector<std::size_t> count(d.n_users(), 0);
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    const auto u = d[i].user.value;
    second[u] = last[u];
    last[u] = i;
    ++count[u];
  }
  const std::size_t needed = with_validation ? 3 : 2;
  std::vector<std::uint8_t> role(d.size(), 0);  // 0 train, 1 validation, 2 test
  for (std::uint32_t u = 0; u < d.n_users(); ++u) {
    if (count[u] < needed) {
      s.excluded_users.push_back(UserId{u});
      continue;
    }
    role[last[u]] = 2;
    if (with_validation) role[second[u]] = 1;
  }
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    (role[i] == 2 ? s.test : role[i] == 1 ? s.validation : s.train).push_back(i);
  }
  if (!s.excluded_users.empty()) {
    spdlog::info("leave-one-out: {} user(s) with fewer than {} interactions excluded from test",
                 s.excluded_users.size(), needed);
  }
  return s;
}

Split SplitByTimepoint(const Dataset& d, Timestamp timepoint) {
  if (d.empty() || timepoint <= d.t_start() || timepoint > d.t_end()) {
    throw UsageError("timepoint " + std::to_string(timepoint) + " outside (" + std::to_string(d.t_start()) + ", " +
                     std::to_string(d.t_end()) + "]");
  }
  Split s;
  s.strategy = SplitStrategy::kByTimepoint;
  s.params.timepoint = timepoint;
  for (InteractionIndex i = 0; i < d.size(); ++i) {
    (d[i].timestamp >= timepoint ? s.test : s.train).push_back(i);
  }
  return s;
}

Split MakeSplit(const Dataset& d, SplitStrategy strategy, const SplitParams& params) {
  switch (strategy) {
    case SplitStrategy::kRandomByRatio:
      return SplitRandomByRatio(d, params.ratio, params.seed);
    case SplitStrategy::kRandomByUser:
      return SplitRandomByUser(d, params.ratio, params.seed);
    case SplitStrategy::kLeaveOneOut:
      return SplitLeaveOneOut(d, params.with_validation);
    case SplitStrategy::kByTimepoint:
      return SplitByTimepoint(d, params.timepoint);
  }
  throw UsageError("unknown split strategy");
}

LeakageAudit AuditLeakage(const Dataset& d, const Split& s) {
  std::vector<Timestamp> train_times;
  train_times.reserve(s.train.size());
  std::vector<bool> in_catalog(d.n_items(), false);
  for (auto i : s.train) {
    train_times.push_back(d[i].timestamp);
    in_catalog[d[i].item.value] = true;
  }
  std::sort(train_times.begin(), train_times.end());
  std::vector<Timestamp> releases;
  for (std::uint32_t item = 0; item < d.n_items(); ++item) {
    if (in_catalog[item]) releases.push_back(d.release_time(ItemId{item}));
  }
  std::sort(releases.begin(), releases.end());

  LeakageAudit audit;
  audit.per_test.reserve(s.test.size());
  for (auto t : s.test) {
    const Timestamp ts = d[t].timestamp;
    TestLeakage row;
    row.test = t;
    row.future_train_count =
        static_cast<std::size_t>(train_times.end() - std::upper_bound(train_times.begin(), train_times.end(), ts));
    row.future_item_count =
        static_cast<std::size_t>(releases.end() - std::upper_bound(releases.begin(), releases.end(), ts));
    audit.total_future_train += row.future_train_count;
    audit.total_future_items += row.future_item_count;
    audit.per_test.push_back(row);
  }
  return audit;
}

nlohmann::json SplitManifest(const Split& s, const LeakageAudit& audit) {
  return {{"strategy", ToString(s.strategy)},
          {"params",
           {{"ratio", s.params.ratio},
            {"timepoint", s.params.timepoint},
            {"seed", s.params.seed},
            {"with_validation", s.params.with_validation}}},
          {"sizes", {{"train", s.train.size()}, {"validation", s.validation.size()}, {"test", s.test.size()}}},
          {"excluded_users", s.excluded_users.size()},
          {"audit",
           {{"total_future_train", audit.total_future_train}, {"total_future_items", audit.total_future_items}}}};
}

void WriteSplit(const Split& s, const LeakageAudit& audit, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteIndexFile(s.train, dir / "train.idx");
  WriteIndexFile(s.validation, dir / "validation.idx");
  WriteIndexFile(s.test, dir / "test.idx");
  std::ofstream manifest(dir / "split.json");
  if (!manifest) throw RuntimeFailure("cannot write split manifest in '" + dir.string() + "'");
  manifest << SplitManifest(s, audit).dump(2) << '\n';
}

Split ReadSplit(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "split.json");
  if (!manifest) throw RuntimeFailure("cannot read split manifest in '" + dir.string() + "'");
  const auto j = nlohmann::json::parse(manifest);
  Split s;
  s.strategy = ParseSplitStrategy(j.at("strategy").get<std::string>());
  const auto& p = j.at("params");
  s.params.ratio = p.at("ratio").get<double>();
  s.params.timepoint = p.at("timepoint").get<Timestamp>();
  s.params.seed = p.at("seed").get<std::uint64_t>();
  s.params.with_validation = p.at("with_validation").get<bool>();
  s.train = ReadIndexFile(dir / "train.idx");
  s.validation = ReadIndexFile(dir / "validation.idx");
  s.test = ReadIndexFile(dir / "test.idx");
  return s;
}

}  // namespace leakproof
