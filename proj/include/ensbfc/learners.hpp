#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ensbfc/policy.hpp"
#include "ensbfc/ridge.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

// A base contextual-bandit algorithm as seen by the master: it proposes a
// policy from its own history and ingests only the observations it is fed.
class BanditLearner {
 public:
  virtual ~BanditLearner() = default;

  virtual std::string_view id() const noexcept = 0;

  // Exponent beta of the declared regret bound O~(n^(1 - beta)).
  virtual double rate_exponent() const noexcept = 0;

  ActionCount action_count() const noexcept { return k_; }
  std::uint64_t internal_time() const noexcept { return n_; }

  // Policy for internal round n + 1. A pure function of the observation
  // history; cached until the next update.
  std::shared_ptr<const Policy> propose();

  void update(const Observation& o);

 protected:
  explicit BanditLearner(ActionCount k) : k_(k) {}

  virtual std::shared_ptr<const Policy> make_policy() const = 0;
  virtual void ingest(const Observation& o) = 0;

 private:
  ActionCount k_;
  std::uint64_t n_ = 0;
  std::shared_ptr<const Policy> cached_;
};

// Disjoint LinUCB on features (1, x): per-arm ridge models, score
// theta_a . z + alpha * sqrt(z^T A_a^{-1} z).
class LinUcbLearner final : public BanditLearner {
 public:
  LinUcbLearner(ActionCount k, std::size_t dimension, double alpha = 1.0, double lambda = 1.0);

  std::string_view id() const noexcept override { return "linucb"; }
  double rate_exponent() const noexcept override { return 0.5; }

  double alpha() const noexcept { return alpha_; }
  const RidgeModel& model(std::size_t action) const { return models_.at(action); }

  static Eigen::VectorXd features(const Context& x);

 private:
  std::shared_ptr<const Policy> make_policy() const override;
  void ingest(const Observation& o) override;

  std::size_t dimension_;
  double alpha_;
  std::vector<RidgeModel> models_;
};

// Epsilon-greedy over the quadrant-indicator reward model
//   phi(x) = (1, 1(x1<0, x2<0), 1(x1<0, x2>=0), 1(x1>=0, x2>=0)),
// fitted per arm by ridge regression, exploring with eps_t = t^(-exponent).
class EpsGreedyLearner final : public BanditLearner {
 public:
  explicit EpsGreedyLearner(ActionCount k, double lambda = 1e-6, double exponent = 1.0 / 3.0);

  std::string_view id() const noexcept override { return "epsgreedy"; }
  double rate_exponent() const noexcept override { return exponent_; }

  // eps_t for round t >= 1.
  double exploration_rate(std::uint64_t t) const;
  const RidgeModel& model(std::size_t action) const { return models_.at(action); }

  static Eigen::VectorXd features(const Context& x);

 private:
  std::shared_ptr<const Policy> make_policy() const override;
  void ingest(const Observation& o) override;

  double exponent_;
  std::vector<RidgeModel> models_;
};

// Context-free UCB1: plays each arm once, then argmax of
// mean_a + sqrt(2 log n / n_a).
class Ucb1Learner final : public BanditLearner {
 public:
  explicit Ucb1Learner(ActionCount k);

  std::string_view id() const noexcept override { return "ucb1"; }
  double rate_exponent() const noexcept override { return 0.5; }

  std::uint64_t pulls(std::size_t action) const { return pulls_.at(action); }
  double reward_sum(std::size_t action) const { return sums_.at(action); }

 private:
  std::shared_ptr<const Policy> make_policy() const override;
  void ingest(const Observation& o) override;

  std::vector<std::uint64_t> pulls_;
  std::vector<double> sums_;
};

// Learner id plus hyperparameters, as read from config files and flags.
struct LearnerSpec {
  std::string id;
  std::map<std::string, double> params;
};

// Registry: "linucb" (alpha, lambda), "epsgreedy" (lambda, exponent), "ucb1".
std::unique_ptr<BanditLearner> make_learner(const LearnerSpec& spec, ActionCount k,
                                            std::size_t dimension);

std::vector<LearnerSpec> parse_learner_list(std::string_view comma_separated);

}  // namespace ensbfc
