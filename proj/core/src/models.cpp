#include "leakproof/models.hpp"

#include <fstream>
#include <sstream>

namespace leakproof {

std::string_view ToString(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPopularity:
      return "popularity";
    case ModelKind::kItemKnn:
      return "itemknn";
    case ModelKind::kBpr:
      return "bpr";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  for (auto kind : {ModelKind::kPopularity, ModelKind::kItemKnn, ModelKind::kBpr}) {
    if (ToString(kind) == name) return kind;
  }
  throw UsageError("unknown model '" + std::string(name) + "' (expected popularity, itemknn or bpr)");
}

std::unique_ptr<Recommender> MakeModel(const ModelSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case ModelKind::kPopularity:
      return std::make_unique<PopularityModel>();
    case ModelKind::kItemKnn:
      return std::make_unique<ItemKnnModel>(spec.neighborhood_size);
    case ModelKind::kBpr: {
      BprParams params = spec.bpr;
      params.seed = seed;
      return std::make_unique<BprModel>(params);
    }
  }
  throw UsageError("unknown model kind");
}

void SaveCheckpoint(const Recommender& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write checkpoint '" + path.string() + "'");
  const nlohmann::json header = {
      {"format", 1}, {"kind", model.kind()}, {"params", model.Params()}, {"consumed", model.consumed_count()}};
  out << header.dump() << '\n';
  for (const auto& x : model.consumed()) {
    out << x.user.value << ' ' << x.item.value << ' ' << x.timestamp << '\n';
  }
  model.WriteState(out);
  if (!out) throw RuntimeFailure("checkpoint write failed for '" + path.string() + "'");
}

std::unique_ptr<Recommender> LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read checkpoint '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  if (header.value("format", 0) != 1) throw RuntimeFailure("unsupported checkpoint format");

  ModelSpec spec;
  spec.kind = ParseModelKind(header.at("kind").get<std::string>());
  const auto& params = header.at("params");
  std::uint64_t seed = 0;
  if (spec.kind == ModelKind::kBpr) {
    spec.bpr = BprParams::FromJson(params);
    seed = spec.bpr.seed;
  } else if (spec.kind == ModelKind::kItemKnn) {
    spec.neighborhood_size = params.at("neighborhood_size").get<std::size_t>();
  }
  auto model = MakeModel(spec, seed);

  const auto consumed = header.at("consumed").get<std::size_t>();
  std::vector<Interaction> log(consumed);
  for (auto& x : log) in >> x.user.value >> x.item.value >> x.timestamp;
  if (!in) throw RuntimeFailure("truncated checkpoint log in '" + path.string() + "'");
  model->Restore(log, in);
  return model;
}

}  // namespace leakproof
