#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "leakproof/models.hpp"
#include "leakproof/rng.hpp"

namespace leakproof {

/// Continuous search ranges. Learning rate and regularization are sampled
/// log-uniformly, latent dimension uniformly over the integers.
struct BprSearchSpace {
  int min_latent_dim = BprParams::kMinLatentDim;
  int max_latent_dim = BprParams::kMaxLatentDim;
  double min_learning_rate = BprParams::kMinLearningRate;
  double max_learning_rate = BprParams::kMaxLearningRate;
  double min_regularization = BprParams::kMinRegularization;
  double max_regularization = BprParams::kMaxRegularization;

  void Validate() const;
};

/// Draws one configuration; fields outside the space are copied from `base`.
BprParams SampleBprParams(const BprSearchSpace& space, const BprParams& base, Rng& rng);

template <typename Params>
struct SearchResult {
  Params best{};
  std::size_t best_trial = 0;
  std::vector<std::pair<Params, double>> trials;
};

/// Generic random search: draws `trials` configurations with `sample(rng)`,
/// scores each with `score(params)` and keeps the argmax. Ties keep the
/// earlier trial.
template <typename Params, typename Sampler, typename Scorer>
SearchResult<Params> RandomSearch(std::size_t trials, std::uint64_t seed, Sampler&& sample, Scorer&& score) {
  if (trials == 0) throw UsageError("random search needs at least one trial");
  Rng rng(seed);
  SearchResult<Params> result;
  double best_score = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Params p = sample(rng);
    const double s = score(p);
    result.trials.emplace_back(p, s);
    if (t == 0 || s > best_score) {
      best_score = s;
      result.best = p;
      result.best_trial = t;
    }
  }
  return result;
}

/// HR@n of `model` on held-out interactions, excluding consumed items.
double ValidationHitRate(const Recommender& model, std::span<const Interaction> validation, std::size_t n);

/// Tunes BPR on (train, validation) by HR@n.
SearchResult<BprParams> TuneBpr(std::span<const Interaction> train, std::span<const Interaction> validation,
                                const BprSearchSpace& space, const BprParams& base, std::size_t trials,
                                std::uint64_t seed, std::size_t n = 20);

/// Tunes the ItemKNN neighbourhood size uniformly over [min_k, max_k].
SearchResult<std::size_t> TuneItemKnn(std::span<const Interaction> train, std::span<const Interaction> validation,
                                      std::size_t min_k, std::size_t max_k, std::size_t trials, std::uint64_t seed,
                                      std::size_t n = 20);

}  // namespace leakproof
