#include "leakproof/random_search.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "leakproof/metrics.hpp"

namespace leakproof {

void BprSearchSpace::Validate() const {
  if (min_latent_dim < BprParams::kMinLatentDim || max_latent_dim > BprParams::kMaxLatentDim ||
      min_latent_dim > max_latent_dim) {
    throw UsageError("search.latent_dim must be a sub-range of [8, 128]");
  }
  if (min_learning_rate < BprParams::kMinLearningRate || max_learning_rate > BprParams::kMaxLearningRate ||
      min_learning_rate > max_learning_rate) {
    throw UsageError("search.learning_rate must be a sub-range of [1e-6, 0.1]");
  }
  if (min_regularization < BprParams::kMinRegularization || max_regularization > BprParams::kMaxRegularization ||
      min_regularization > max_regularization) {
    throw UsageError("search.regularization must be a sub-range of [1e-4, 0.1]");
  }
}

BprParams SampleBprParams(const BprSearchSpace& space, const BprParams& base, Rng& rng) {
  BprParams p = base;
  p.latent_dim = static_cast<int>(rng.UniformInt(space.min_latent_dim, space.max_latent_dim));
  p.learning_rate = std::clamp(rng.LogUniform(space.min_learning_rate, space.max_learning_rate),
                               space.min_learning_rate, space.max_learning_rate);
  p.regularization = std::clamp(rng.LogUniform(space.min_regularization, space.max_regularization),
                                space.min_regularization, space.max_regularization);
  return p;
}

double ValidationHitRate(const Recommender& model, std::span<const Interaction> validation, std::size_t n) {
  if (validation.empty()) throw UsageError("validation set is empty");
  std::size_t hits = 0;
  for (const auto& x : validation) {
    Query q;
    q.user = x.user;
    q.n = n;
    q.asof = x.timestamp;
    hits += static_cast<std::size_t>(HitAtN(model.Recommend(q), x.item));
  }
  return static_cast<double>(hits) / static_cast<double>(validation.size());
}

SearchResult<BprParams> TuneBpr(std::span<const Interaction> train, std::span<const Interaction> validation,
                                const BprSearchSpace& space, const BprParams& base, std::size_t trials,
                                std::uint64_t seed, std::size_t n) {
  space.Validate();
  if (validation.empty()) throw UsageError("validation set is empty");
  return RandomSearch<BprParams>(
      trials, seed, [&](Rng& rng) { return SampleBprParams(space, base, rng); },
      [&](const BprParams& p) {
        BprModel model(p);
        try {
          model.Fit(train);
        } catch (const BprDivergence& e) {
          spdlog::warn("search trial diverged: {}", e.what());
          return 0.0;
        }
        const double hr = ValidationHitRate(model, validation, n);
        spdlog::debug("bpr trial dim={} lr={:.3g} reg={:.3g} -> HR@{}={:.4f}", p.latent_dim, p.learning_rate,
                      p.regularization, n, hr);
        return hr;
      });
}

SearchResult<std::size_t> TuneItemKnn(std::span<const Interaction> train, std::span<const Interaction> validation,
                                      std::size_t min_k, std::size_t max_k, std::size_t trials, std::uint64_t seed,
                                      std::size_t n) {
  if (min_k < 1 || min_k > max_k) throw UsageError("search.neighborhood_size must be a non-empty range >= 1");
  if (validation.empty()) throw UsageError("validation set is empty");
  return RandomSearch<std::size_t>(
      trials, seed,
      [&](Rng& rng) {
        return static_cast<std::size_t>(rng.UniformInt(static_cast<std::int64_t>(min_k), static_cast<std::int64_t>(max_k)));
      },
      [&](std::size_t k) {
        ItemKnnModel model(k);
        model.Fit(train);
        return ValidationHitRate(model, validation, n);
      });
}

}  // namespace leakproof
