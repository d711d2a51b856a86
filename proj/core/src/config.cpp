#include "leakproof/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace leakproof {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "dataset", "schema", "delimiter", "header", "window_days", "test_window", "future", "seeds", "topn", "jobs",
      "exclude_seen", "model", "label", "similarity",
      "bpr.latent_dim", "bpr.learning_rate", "bpr.regularization", "bpr.epochs", "bpr.negatives", "bpr.init_stddev",
      "bpr.update_steps",
      "itemknn.neighborhood_size",
      "search.trials", "search.seed", "search.latent_dim", "search.learning_rate", "search.regularization",
      "search.neighborhood_size", "search.freeze",
      "timeline.mode", "timeline.batch_size", "timeline.window_days", "timeline.origin", "timeline.split",
      "timeline.ratio", "timeline.split_seed", "timeline.timepoint", "timeline.seed"};
  return keys;
}

// Typed access that records problems instead of throwing.
class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& values) : values_(values) {}

  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  template <typename T>
  void Number(const std::string& key, T& out) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    const auto& text = it->second;
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      problems.push_back(key + ": '" + text + "' is not a valid number");
      return;
    }
    out = value;
  }

  void Bool(const std::string& key, bool& out) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    if (it->second == "true" || it->second == "1" || it->second == "yes") {
      out = true;
    } else if (it->second == "false" || it->second == "0" || it->second == "no") {
      out = false;
    } else {
      problems.push_back(key + ": '" + it->second + "' is not a boolean");
    }
  }

  /// "A..B" or a single value "A" (meaning A..A).
  template <typename T>
  void Range(const std::string& key, T& lo, T& hi) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    const auto& text = it->second;
    const auto dots = text.find("..");
    const std::string a = Trim(dots == std::string::npos ? text : text.substr(0, dots));
    const std::string b = Trim(dots == std::string::npos ? text : text.substr(dots + 2));
    T x{};
    T y{};
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), x);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), y);
    if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} ||
        r2.ptr != b.data() + b.size()) {
      problems.push_back(key + ": '" + text + "' is not a range LO..HI");
      return;
    }
    lo = x;
    hi = y;
  }

  const std::string* Text(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  template <typename Fn>
  void Parse(const std::string& key, Fn&& fn) {
    if (const auto* text = Text(key)) {
      try {
        fn(*text);
      } catch (const UsageError& e) {
        problems.push_back(key + ": " + e.what());
      }
    }
  }

  std::vector<std::string> problems;

 private:
  const std::map<std::string, std::string>& values_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : UsageError([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> out;
  std::vector<std::string> problems;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto content = Trim(line);
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') {
        problems.push_back("line " + std::to_string(line_no) + ": unterminated section header");
        continue;
      }
      section = Trim(std::string_view(content).substr(1, content.size() - 2));
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const auto key = Trim(std::string_view(content).substr(0, eq));
    const auto value = Trim(std::string_view(content).substr(eq + 1));
    out[section.empty() ? key : section + "." + key] = value;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return out;
}

ExperimentConfig BuildExperimentConfig(const std::map<std::string, std::string>& values,
                                       const std::map<std::string, std::string>& overrides,
                                       const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> merged = values;
  for (const auto& [k, v] : overrides) merged[k] = v;

  Reader r(merged);
  for (const auto& [key, value] : merged) {
    if (!KnownKeys().count(key)) r.problems.push_back(key + ": unknown key");
  }

  ExperimentConfig cfg;
  cfg.entries = merged;
  if (const auto* path = r.Text("dataset")) {
    cfg.dataset = std::filesystem::path(*path);
    if (cfg.dataset.is_relative() && !base_dir.empty()) cfg.dataset = base_dir / cfg.dataset;
  } else {
    r.problems.push_back("dataset: required");
  }
  r.Parse("schema", [&](const std::string& v) {
    const auto delimiter = cfg.schema.delimiter;
    cfg.schema = Schema::Parse(v);
    cfg.schema.delimiter = delimiter;
  });
  if (const auto* d = r.Text("delimiter")) {
    if (*d == "tab" || *d == "\\t") {
      cfg.schema.delimiter = '\t';
    } else if (d->size() == 1) {
      cfg.schema.delimiter = (*d)[0];
    } else {
      r.problems.push_back("delimiter: must be a single character or 'tab'");
    }
  }
  r.Bool("header", cfg.schema.header);

  auto& sweep = cfg.sweep;
  double window_days = 365.0;
  r.Number("window_days", window_days);
  if (!(window_days > 0)) r.problems.push_back("window_days: must be positive");
  sweep.window_length = static_cast<Timestamp>(window_days * kSecondsPerDay);
  r.Number("test_window", sweep.test_window);
  r.Range("future", sweep.future_from, sweep.future_to);
  r.Parse("seeds", [&](const std::string& v) {
    sweep.seeds.clear();
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const auto t = Trim(part);
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
      if (ec != std::errc{} || ptr != t.data() + t.size()) throw UsageError("'" + t + "' is not a seed");
      sweep.seeds.push_back(seed);
    }
    if (sweep.seeds.empty()) throw UsageError("at least one seed is required");
  });
  r.Number("topn", sweep.topn);
  r.Number("jobs", sweep.jobs);
  r.Bool("exclude_seen", sweep.exclude_seen);
  r.Parse("model", [&](const std::string& v) { sweep.model.kind = ParseModelKind(v); });
  if (const auto* label = r.Text("label")) sweep.label = *label;
  r.Bool("similarity", cfg.similarity);

  auto& bpr = sweep.model.bpr;
  r.Number("bpr.latent_dim", bpr.latent_dim);
  r.Number("bpr.learning_rate", bpr.learning_rate);
  r.Number("bpr.regularization", bpr.regularization);
  r.Number("bpr.epochs", bpr.epochs);
  r.Number("bpr.negatives", bpr.negatives_per_positive);
  r.Number("bpr.init_stddev", bpr.init_stddev);
  r.Number("bpr.update_steps", bpr.update_steps_per_interaction);
  if (sweep.model.kind == ModelKind::kBpr) {
    try {
      bpr.Validate();
    } catch (const UsageError& e) {
      r.problems.emplace_back(e.what());
    }
  }
  r.Number("itemknn.neighborhood_size", sweep.model.neighborhood_size);
  if (sweep.model.neighborhood_size == 0) r.problems.push_back("itemknn.neighborhood_size: must be positive");

  auto& tuning = sweep.tuning;
  r.Number("search.trials", tuning.trials);
  r.Number("search.seed", tuning.seed);
  r.Range("search.latent_dim", tuning.bpr_space.min_latent_dim, tuning.bpr_space.max_latent_dim);
  r.Range("search.learning_rate", tuning.bpr_space.min_learning_rate, tuning.bpr_space.max_learning_rate);
  r.Range("search.regularization", tuning.bpr_space.min_regularization, tuning.bpr_space.max_regularization);
  r.Range("search.neighborhood_size", tuning.min_neighbors, tuning.max_neighbors);
  r.Bool("search.freeze", tuning.freeze_at_reference);
  if (tuning.trials > 0) {
    try {
      tuning.bpr_space.Validate();
    } catch (const UsageError& e) {
      r.problems.emplace_back(e.what());
    }
  }
  if (cfg.similarity) tuning.freeze_at_reference = true;

  if (sweep.topn == 0) r.problems.push_back("topn: must be positive");
  if (sweep.jobs == 0) r.problems.push_back("jobs: must be positive");
  if (sweep.future_from < 0 || sweep.future_to < sweep.future_from) {
    r.problems.push_back("future: range must be non-negative and ascending");
  }

  auto& tl = cfg.timeline;
  tl.topn = sweep.topn;
  tl.exclude_seen = sweep.exclude_seen;
  r.Parse("timeline.mode", [&](const std::string& v) { tl.mode = ParseTimelineMode(v); });
  r.Number("timeline.batch_size", tl.batch_size);
  if (tl.batch_size == 0) r.problems.push_back("timeline.batch_size: must be positive");
  double sliding_days = 7.0;
  r.Number("timeline.window_days", sliding_days);
  if (!(sliding_days > 0)) r.problems.push_back("timeline.window_days: must be positive");
  tl.window = static_cast<Timestamp>(sliding_days * kSecondsPerDay);
  if (r.Has("timeline.origin")) {
    Timestamp origin = 0;
    r.Number("timeline.origin", origin);
    tl.origin = origin;
  }
  r.Parse("timeline.split", [&](const std::string& v) { cfg.mask_strategy = ParseSplitStrategy(v); });
  r.Number("timeline.ratio", cfg.mask_params.ratio);
  r.Number("timeline.split_seed", cfg.mask_params.seed);
  r.Number("timeline.timepoint", cfg.mask_params.timepoint);
  r.Number("timeline.seed", cfg.timeline_seed);

  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read configuration '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return BuildExperimentConfig(ParseKeyValues(buffer.str()), overrides, path.parent_path());
}

}  // namespace leakproof
