#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leakproof/model.hpp"
#include "leakproof/rng.hpp"

namespace leakproof {

/// Hyperparameters of BPR matrix factorization. The bounds on latent_dim,
/// learning_rate and regularization mirror the tuning ranges of the protocol.
struct BprParams {
  int latent_dim = 32;
  double learning_rate = 0.05;
  double regularization = 0.001;
  int epochs = 50;
  int negatives_per_positive = 1;
  std::uint64_t seed = 0;
  double init_stddev = 0.1;
  /// SGD steps per new interaction on Update().
  int update_steps_per_interaction = 10;

  static constexpr int kMinLatentDim = 8;
  static constexpr int kMaxLatentDim = 128;
  static constexpr double kMinLearningRate = 1e-6;
  static constexpr double kMaxLearningRate = 0.1;
  static constexpr double kMinRegularization = 1e-4;
  static constexpr double kMaxRegularization = 0.1;

  /// Throws UsageError naming the first out-of-range field.
  void Validate() const;
  nlohmann::json ToJson() const;
  static BprParams FromJson(const nlohmann::json& j);
};

/// 1 - sigmoid(x): the weight of the pairwise term in the gradient.
double BprGradientWeight(double margin);

/// Per-triple objective to minimise:
///   -ln sigmoid(<u, p> - <u, n>) + reg * (|u|^2 + |p|^2 + |n|^2)
double BprTripleLoss(std::span<const double> user, std::span<const double> pos, std::span<const double> neg,
                     double regularization);

/// Analytic gradient of BprTripleLoss with respect to each factor vector.
void BprTripleGradient(std::span<const double> user, std::span<const double> pos, std::span<const double> neg,
                       double regularization, std::span<double> grad_user, std::span<double> grad_pos,
                       std::span<double> grad_neg);

class BprDivergence : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

// Matrix factorization trained with the pairwise ranking loss by SGD.
//
// One epoch is a shuffled pass over the consumed interactions; every positive
// draws negatives_per_positive items uniformly from the catalog items the user
// has not consumed. Factors of new users and items are drawn from
// N(0, init_stddev^2) with the model's own generator, so identical seeds and
// inputs give identical factors.
class BprModel final : public Recommender {
 public:
  explicit BprModel(BprParams params);

  std::string_view kind() const override { return "bpr"; }
  nlohmann::json Params() const override { return params_.ToJson(); }
  const BprParams& params() const { return params_; }

  /// Incremental update with an explicit number of SGD steps.
  void Update(std::span<const Interaction> fresh, std::size_t steps);
  using Recommender::Update;

  /// Mean per-triple loss of every epoch run by Fit().
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  std::span<const double> user_factors(UserId u) const;
  std::span<const double> item_factors(ItemId i) const;
  double Predict(UserId u, ItemId i) const;

  void WriteState(std::ostream& out) const override;

 protected:
  void Reset() override;
  void Train(std::span<const Interaction> fresh, bool initial) override;
  bool Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const override;
  void ReadState(std::istream& in) override;

 private:
  void GrowFactors(std::span<const Interaction> fresh);
  /// One SGD step on (u, pos, neg); returns the triple loss before the step.
  double Step(UserId u, ItemId pos, ItemId neg);
  bool SampleNegative(UserId u, ItemId& out);
  double RunSteps(std::size_t steps);

  BprParams params_;
  Rng rng_;
  std::optional<std::size_t> requested_steps_;
  std::vector<double> user_factors_;
  std::vector<double> item_factors_;
  std::size_t n_users_ = 0;
  std::size_t n_items_ = 0;
  std::vector<double> epoch_losses_;
};

}  // namespace leakproof
