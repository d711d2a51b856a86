#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "leakproof/bpr.hpp"
#include "leakproof/item_knn.hpp"
#include "leakproof/popularity.hpp"

namespace leakproof {

enum class ModelKind { kPopularity, kItemKnn, kBpr };

std::string_view ToString(ModelKind kind);
/// Accepts "popularity", "itemknn", "bpr".
ModelKind ParseModelKind(std::string_view name);

/// Everything needed to build a fresh model for one run.
struct ModelSpec {
  ModelKind kind = ModelKind::kPopularity;
  BprParams bpr;
  std::size_t neighborhood_size = 50;
};

/// A fresh, unfitted model; `seed` overrides the BPR seed.
std::unique_ptr<Recommender> MakeModel(const ModelSpec& spec, std::uint64_t seed);

// Checkpoint layout (text):
//   line 1   JSON header {"format":1,"kind":...,"params":{...},"consumed":N}
//   N lines  "user item timestamp" of the consumed log, in consumption order
//   rest     model-specific state (BPR: sizes, generator state, factors)
// Loading replays the log into a fresh model of the same kind, so update()
// resumes exactly where the saved model stopped.
void SaveCheckpoint(const Recommender& model, const std::filesystem::path& path);
std::unique_ptr<Recommender> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace leakproof
