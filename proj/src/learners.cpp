#include "ensbfc/learners.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ensbfc {

std::shared_ptr<const Policy> BanditLearner::propose() {
  if (!cached_) cached_ = make_policy();
  return cached_;
}

void BanditLearner::update(const Observation& o) {
  check_action(o.action, k_);
  if (!std::isfinite(o.reward)) throw std::domain_error("reward must be finite");
  ingest(o);
  ++n_;
  cached_.reset();
}

// ---------------------------------------------------------------------------
// LinUCB

namespace {

struct LinUcbSnapshot {
  std::vector<Eigen::VectorXd> theta;
  std::vector<Eigen::MatrixXd> inverse;
  double alpha;
};

}  // namespace

LinUcbLearner::LinUcbLearner(ActionCount k, std::size_t dimension, double alpha, double lambda)
    : BanditLearner(k), dimension_(dimension), alpha_(alpha) {
  if (dimension == 0) throw std::domain_error("LinUCB needs a positive context dimension");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error("LinUCB width multiplier must be finite and >= 0");
  }
  models_.assign(k.value(), RidgeModel(dimension + 1, lambda));
}

Eigen::VectorXd LinUcbLearner::features(const Context& x) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(x.dimension() + 1));
  z[0] = 1.0;
  for (std::size_t i = 0; i < x.dimension(); ++i) z[static_cast<Eigen::Index>(i + 1)] = x[i];
  return z;
}

void LinUcbLearner::ingest(const Observation& o) {
  if (o.context.dimension() != dimension_) {
    throw std::invalid_argument("context dimension does not match LinUCB model");
  }
  models_[o.action].add(features(o.context), o.reward);
}

std::shared_ptr<const Policy> LinUcbLearner::make_policy() const {
  auto snapshot = std::make_shared<LinUcbSnapshot>();
  snapshot->alpha = alpha_;
  for (const auto& model : models_) {
    snapshot->theta.push_back(model.coefficients());
    snapshot->inverse.push_back(model.inverse_design());
  }
  const std::size_t p = dimension_ + 1;
  auto scorer = [snapshot, p](const Context& x, std::span<double> scores) {
    double z[16];
    std::vector<double> heap;
    double* zp = z;
    if (p > 16) {
      heap.resize(p);
      zp = heap.data();
    }
    zp[0] = 1.0;
    for (std::size_t i = 1; i < p; ++i) zp[i] = x[i - 1];
    for (std::size_t a = 0; a < scores.size(); ++a) {
      const auto& theta = snapshot->theta[a];
      const auto& inv = snapshot->inverse[a];
      double mean = 0.0, width = 0.0;
      for (std::size_t r = 0; r < p; ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        mean += theta[ri] * zp[r];
        double row = 0.0;
        for (std::size_t c = 0; c < p; ++c) row += inv(ri, static_cast<Eigen::Index>(c)) * zp[c];
        width += zp[r] * row;
      }
      scores[a] = mean + snapshot->alpha * std::sqrt(std::max(width, 0.0));
    }
  };
  return std::make_shared<GreedyPolicy>(action_count(), std::move(scorer));
}

// ---------------------------------------------------------------------------
// epsilon-greedy

EpsGreedyLearner::EpsGreedyLearner(ActionCount k, double lambda, double exponent)
    : BanditLearner(k), exponent_(exponent) {
  if (!(exponent > 0.0 && exponent <= 0.5)) {
    throw std::domain_error("epsilon-greedy exponent must lie in (0, 1/2]");
  }
  models_.assign(k.value(), RidgeModel(4, lambda));
}

Eigen::VectorXd EpsGreedyLearner::features(const Context& x) {
  if (x.dimension() < 2) {
    throw std::invalid_argument("quadrant features need at least two context components");
  }
  const bool neg1 = x[0] < 0.0;
  const bool neg2 = x[1] < 0.0;
  Eigen::VectorXd phi(4);
  phi << 1.0, (neg1 && neg2) ? 1.0 : 0.0, (neg1 && !neg2) ? 1.0 : 0.0,
      (!neg1 && !neg2) ? 1.0 : 0.0;
  return phi;
}

double EpsGreedyLearner::exploration_rate(std::uint64_t t) const {
  if (t < 1) throw std::domain_error("round index starts at 1");
  return std::min(1.0, std::pow(static_cast<double>(t), -exponent_));
}

void EpsGreedyLearner::ingest(const Observation& o) {
  models_[o.action].add(features(o.context), o.reward);
}

std::shared_ptr<const Policy> EpsGreedyLearner::make_policy() const {
  auto theta = std::make_shared<std::vector<Eigen::VectorXd>>();
  for (const auto& model : models_) theta->push_back(model.coefficients());
  auto scorer = [theta](const Context& x, std::span<double> scores) {
    const Eigen::VectorXd phi = features(x);
    for (std::size_t a = 0; a < scores.size(); ++a) scores[a] = (*theta)[a].dot(phi);
  };
  return std::make_shared<GreedyPolicy>(action_count(), std::move(scorer),
                                        exploration_rate(internal_time() + 1));
}

// ---------------------------------------------------------------------------
// UCB1

Ucb1Learner::Ucb1Learner(ActionCount k)
    : BanditLearner(k), pulls_(k.value(), 0), sums_(k.value(), 0.0) {}

void Ucb1Learner::ingest(const Observation& o) {
  ++pulls_[o.action];
  sums_[o.action] += o.reward;
}

std::shared_ptr<const Policy> Ucb1Learner::make_policy() const {
  std::vector<double> index(pulls_.size());
  const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(internal_time(), 1)));
  for (std::size_t a = 0; a < pulls_.size(); ++a) {
    if (pulls_[a] == 0) {
      // Unplayed arms first, lowest index first.
      index[a] = std::numeric_limits<double>::infinity();
      for (std::size_t b = a + 1; b < index.size(); ++b) index[b] = -std::numeric_limits<double>::infinity();
      break;
    }
    const double n_a = static_cast<double>(pulls_[a]);
    index[a] = sums_[a] / n_a + std::sqrt(2.0 * log_n / n_a);
  }
  auto scorer = [index = std::move(index)](const Context&, std::span<double> scores) {
    std::copy(index.begin(), index.end(), scores.begin());
  };
  return std::make_shared<GreedyPolicy>(action_count(), std::move(scorer));
}

// ---------------------------------------------------------------------------
// registry

namespace {

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double value = it->second;
  params.erase(it);
  return value;
}

}  // namespace

std::unique_ptr<BanditLearner> make_learner(const LearnerSpec& spec, ActionCount k,
                                            std::size_t dimension) {
  auto params = spec.params;
  std::unique_ptr<BanditLearner> learner;
  try {
    if (spec.id == "linucb") {
      const double alpha = take(params, "alpha", 1.0);
      const double lambda = take(params, "lambda", 1.0);
      learner = std::make_unique<LinUcbLearner>(k, dimension, alpha, lambda);
    } else if (spec.id == "epsgreedy") {
      const double lambda = take(params, "lambda", 1e-6);
      const double exponent = take(params, "exponent", 1.0 / 3.0);
      learner = std::make_unique<EpsGreedyLearner>(k, lambda, exponent);
    } else if (spec.id == "ucb1") {
      learner = std::make_unique<Ucb1Learner>(k);
    } else {
      throw ConfigError("unknown learner '" + spec.id + "'");
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(spec.id + ": " + e.what());
  }
  if (!params.empty()) {
    throw ConfigError("unknown parameter '" + params.begin()->first + "' for learner '" +
                      spec.id + "'");
  }
  return learner;
}

std::vector<LearnerSpec> parse_learner_list(std::string_view comma_separated) {
  std::vector<LearnerSpec> specs;
  std::stringstream in{std::string(comma_separated)};
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty learner id in list");
    specs.push_back(LearnerSpec{item.substr(first, last - first + 1), {}});
  }
  if (specs.empty()) throw ConfigError("learner list is empty");
  return specs;
}

}  // namespace ensbfc
