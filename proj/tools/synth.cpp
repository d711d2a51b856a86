// leakproof-synth: writes a synthetic "user,item,timestamp" log.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "leakproof/synthetic.hpp"

int main(int argc, char** argv) {
  leakproof::SyntheticConfig cfg;
  std::string out;
  CLI::App app{"synthetic interaction log generator", "leakproof-synth"};
  app.add_option("--users", cfg.n_users)->capture_default_str();
  app.add_option("--items", cfg.n_items)->capture_default_str();
  app.add_option("--per-user", cfg.interactions_per_user, "mean interactions per user")->capture_default_str();
  app.add_option("--min-per-user", cfg.min_per_user)->capture_default_str();
  app.add_option("--start", cfg.t_start, "first timestamp (unix seconds)")->capture_default_str();
  app.add_option_function<double>(
         "--years", [&](double y) { cfg.duration = static_cast<leakproof::Timestamp>(y * leakproof::kSecondsPerYear); },
         "span length")
      ->default_str("5");
  app.add_option("--clusters", cfg.clusters)->capture_default_str();
  app.add_option("--recency", cfg.recency, "mean item age at interaction, as a fraction of the span")
      ->capture_default_str();
  app.add_option("--active", cfg.mean_active_fraction, "mean user active period, as a fraction of the span")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  app.add_option("--out,-o", out, "output file (stdout if omitted)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const auto rows = leakproof::GenerateSynthetic(cfg);
    std::ofstream file;
    if (!out.empty()) file.open(out);
    std::ostream& os = out.empty() ? std::cout : file;
    for (const auto& r : rows) os << r.user << ',' << r.item << ',' << r.timestamp << '\n';
  } catch (const leakproof::UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
