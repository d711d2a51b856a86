#include "leakproof/bpr.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace leakproof {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln(1 + e^x) without overflow.
double Softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += a[f] * b[f];
  return s;
}

double SquaredNorm(std::span<const double> a) { return Dot(a, a); }

}  // namespace

void BprParams::Validate() const {
  auto fail = [](const std::string& field, const std::string& range) {
    throw UsageError("bpr." + field + " outside " + range);
  };
  if (latent_dim < kMinLatentDim || latent_dim > kMaxLatentDim) fail("latent_dim", "[8, 128]");
  if (!(learning_rate >= kMinLearningRate && learning_rate <= kMaxLearningRate)) fail("learning_rate", "[1e-6, 0.1]");
  if (!(regularization >= kMinRegularization && regularization <= kMaxRegularization)) {
    fail("regularization", "[1e-4, 0.1]");
  }
  if (epochs < 1) fail("epochs", "[1, inf)");
  if (negatives_per_positive < 1) fail("negatives_per_positive", "[1, inf)");
  if (!(init_stddev > 0)) fail("init_stddev", "(0, inf)");
  if (update_steps_per_interaction < 0) fail("update_steps_per_interaction", "[0, inf)");
}

nlohmann::json BprParams::ToJson() const {
  return {{"latent_dim", latent_dim},
          {"learning_rate", learning_rate},
          {"regularization", regularization},
          {"epochs", epochs},
          {"negatives_per_positive", negatives_per_positive},
          {"seed", seed},
          {"init_stddev", init_stddev},
          {"update_steps_per_interaction", update_steps_per_interaction}};
}

BprParams BprParams::FromJson(const nlohmann::json& j) {
  BprParams p;
  p.latent_dim = j.value("latent_dim", p.latent_dim);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.regularization = j.value("regularization", p.regularization);
  p.epochs = j.value("epochs", p.epochs);
  p.negatives_per_positive = j.value("negatives_per_positive", p.negatives_per_positive);
  p.seed = j.value("seed", p.seed);
  p.init_stddev = j.value("init_stddev", p.init_stddev);
  p.update_steps_per_interaction = j.value("update_steps_per_interaction", p.update_steps_per_interaction);
  return p;
}

double BprGradientWeight(double margin) { return Sigmoid(-margin); }

double BprTripleLoss(std::span<const double> user, std::span<const double> pos, std::span<const double> neg,
                     double regularization) {
  const double margin = Dot(user, pos) - Dot(user, neg);
  return Softplus(-margin) + regularization * (SquaredNorm(user) + SquaredNorm(pos) + SquaredNorm(neg));
}

void BprTripleGradient(std::span<const double> user, std::span<const double> pos, std::span<const double> neg,
                       double regularization, std::span<double> grad_user, std::span<double> grad_pos,
                       std::span<double> grad_neg) {
  const double weight = BprGradientWeight(Dot(user, pos) - Dot(user, neg));
  for (std::size_t f = 0; f < user.size(); ++f) {
    grad_user[f] = -weight * (pos[f] - neg[f]) + 2.0 * regularization * user[f];
    grad_pos[f] = -weight * user[f] + 2.0 * regularization * pos[f];
    grad_neg[f] = weight * user[f] + 2.0 * regularization * neg[f];
  }
}

BprModel::BprModel(BprParams params) : params_(params), rng_(params.seed) { params_.Validate(); }

void BprModel::Reset() {
  rng_ = Rng(params_.seed);
  user_factors_.clear();
  item_factors_.clear();
  n_users_ = 0;
  n_items_ = 0;
  epoch_losses_.clear();
}

void BprModel::GrowFactors(std::span<const Interaction> fresh) {
  std::size_t users = n_users_;
  std::size_t items = n_items_;
  for (const auto& x : fresh) {
    users = std::max<std::size_t>(users, x.user.value + 1);
    items = std::max<std::size_t>(items, x.item.value + 1);
  }
  const auto dim = static_cast<std::size_t>(params_.latent_dim);
  for (std::size_t k = n_users_ * dim; k < users * dim; ++k) user_factors_.push_back(rng_.Normal(0.0, params_.init_stddev));
  for (std::size_t k = n_items_ * dim; k < items * dim; ++k) item_factors_.push_back(rng_.Normal(0.0, params_.init_stddev));
  n_users_ = users;
  n_items_ = items;
}

std::span<const double> BprModel::user_factors(UserId u) const {
  const auto dim = static_cast<std::size_t>(params_.latent_dim);
  if (u.value >= n_users_) return {};
  return {user_factors_.data() + u.value * dim, dim};
}

std::span<const double> BprModel::item_factors(ItemId i) const {
  const auto dim = static_cast<std::size_t>(params_.latent_dim);
  if (i.value >= n_items_) return {};
  return {item_factors_.data() + i.value * dim, dim};
}

double BprModel::Predict(UserId u, ItemId i) const {
  const auto p = user_factors(u);
  const auto q = item_factors(i);
  if (p.empty() || q.empty()) return 0.0;
  return Dot(p, q);
}

double BprModel::Step(UserId u, ItemId pos, ItemId neg) {
  const auto dim = static_cast<std::size_t>(params_.latent_dim);
  double* pu = user_factors_.data() + u.value * dim;
  double* qi = item_factors_.data() + pos.value * dim;
  double* qj = item_factors_.data() + neg.value * dim;
  double margin = 0.0;
  double norms = 0.0;
  for (std::size_t f = 0; f < dim; ++f) {
    margin += pu[f] * (qi[f] - qj[f]);
    norms += pu[f] * pu[f] + qi[f] * qi[f] + qj[f] * qj[f];
  }
  const double weight = BprGradientWeight(margin);
  const double lr = params_.learning_rate;
  const double reg2 = 2.0 * params_.regularization;
  for (std::size_t f = 0; f < dim; ++f) {
    const double u_f = pu[f];
    const double i_f = qi[f];
    const double j_f = qj[f];
    pu[f] -= lr * (-weight * (i_f - j_f) + reg2 * u_f);
    qi[f] -= lr * (-weight * u_f + reg2 * i_f);
    qj[f] -= lr * (weight * u_f + reg2 * j_f);
  }
  return Softplus(-margin) + params_.regularization * norms;
}

bool BprModel::SampleNegative(UserId u, ItemId& out) {
  const auto& catalog = catalog_items();
  const auto history = History(u);
  if (history.size() >= catalog.size()) return false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const ItemId candidate = catalog[rng_.UniformIndex(catalog.size())];
    if (!std::binary_search(history.begin(), history.end(), candidate)) {
      out = candidate;
      return true;
    }
  }
  std::vector<ItemId> unseen;
  for (auto item : catalog) {
    if (!std::binary_search(history.begin(), history.end(), item)) unseen.push_back(item);
  }
  out = unseen[rng_.UniformIndex(unseen.size())];
  return true;
}

double BprModel::RunSteps(std::size_t steps) {
  const auto& log = consumed();
  double total = 0.0;
  std::size_t triples = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& x = log[rng_.UniformIndex(log.size())];
    ItemId neg;
    if (!SampleNegative(x.user, neg)) continue;
    total += Step(x.user, x.item, neg);
    ++triples;
  }
  return triples == 0 ? 0.0 : total / static_cast<double>(triples);
}

void BprModel::Train(std::span<const Interaction> fresh, bool initial) {
  GrowFactors(fresh);
  if (!initial) {
    const std::size_t steps = requested_steps_.value_or(fresh.size() * params_.update_steps_per_interaction);
    const double loss = RunSteps(steps);
    if (!std::isfinite(loss)) {
      throw BprDivergence("bpr update diverged: mean loss " + std::to_string(loss) + " over " +
                          std::to_string(steps) + " steps (learning_rate=" + std::to_string(params_.learning_rate) +
                          ")");
    }
    return;
  }
  const auto& log = consumed();
  std::vector<std::uint32_t> order(log.size());
  std::iota(order.begin(), order.end(), 0u);
  for (int epoch = 0; epoch < params_.epochs; ++epoch) {
    rng_.Shuffle(std::span(order));
    double total = 0.0;
    std::size_t triples = 0;
    for (auto k : order) {
      const auto& x = log[k];
      for (int n = 0; n < params_.negatives_per_positive; ++n) {
        ItemId neg;
        if (!SampleNegative(x.user, neg)) break;
        total += Step(x.user, x.item, neg);
        ++triples;
      }
    }
    const double mean = triples == 0 ? 0.0 : total / static_cast<double>(triples);
    if (!std::isfinite(mean)) {
      std::ostringstream msg;
      msg << "bpr training diverged at epoch " << epoch + 1 << ": mean loss " << mean << " (latent_dim="
          << params_.latent_dim << ", learning_rate=" << params_.learning_rate
          << ", regularization=" << params_.regularization << ", triples=" << triples << ")";
      throw BprDivergence(msg.str());
    }
    epoch_losses_.push_back(mean);
  }
}

void BprModel::Update(std::span<const Interaction> fresh, std::size_t steps) {
  requested_steps_ = steps;
  try {
    Recommender::Update(fresh);
  } catch (...) {
    requested_steps_.reset();
    throw;
  }
  requested_steps_.reset();
}

bool BprModel::Score(UserId u, std::span<const ItemId> candidates, std::span<double> out) const {
  const auto p = user_factors(u);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto q = item_factors(candidates[k]);
    out[k] = (p.empty() || q.empty()) ? 0.0 : Dot(p, q);
  }
  return false;
}

void BprModel::WriteState(std::ostream& out) const {
  out.precision(17);
  out << n_users_ << ' ' << n_items_ << '\n';
  rng_.Save(out);
  out << '\n';
  for (double v : user_factors_) out << v << '\n';
  for (double v : item_factors_) out << v << '\n';
}

void BprModel::ReadState(std::istream& in) {
  in >> n_users_ >> n_items_;
  rng_.Load(in);
  const auto dim = static_cast<std::size_t>(params_.latent_dim);
  user_factors_.resize(n_users_ * dim);
  item_factors_.resize(n_items_ * dim);
  for (auto& v : user_factors_) in >> v;
  for (auto& v : item_factors_) in >> v;
  if (!in) throw RuntimeFailure("truncated bpr checkpoint state");
}

}  // namespace leakproof
