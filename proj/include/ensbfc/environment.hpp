#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ensbfc/random.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

// Value of the optimal measurable policy, with how it was obtained.
struct OracleValue {
  double value = 0.0;
  std::string method;          // "exact" or "monte-carlo"
  std::size_t samples = 0;     // 0 for exact values
  std::uint64_t seed = 0;
  double std_error = 0.0;
};

inline constexpr std::size_t kOracleSamples = 1'000'000;
inline constexpr std::uint64_t kOracleSeed = 0x0E7B'FC5E'ED00'0001ULL;

// Stationary stochastic contextual environment. Implementations are
// immutable after construction and safe to share across threads.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view id() const noexcept = 0;
  virtual ActionCount action_count() const noexcept = 0;
  virtual std::size_t dimension() const noexcept = 0;

  // i.i.d. standard normal components unless overridden.
  virtual Context sample_context(Rng& rng) const;
  virtual double true_mean(std::size_t action, const Context& x) const = 0;
  virtual double sample_reward(std::size_t action, const Context& x, Rng& rng) const = 0;

  // E[max_a true_mean(a, X)].
  virtual OracleValue optimal_value() const = 0;

  // Action maximizing the true mean at x (lowest index on ties).
  std::size_t best_action(const Context& x) const;
};

// Quadrant of (x1, x2): 0 = (x1<0, x2<0), 1 = (x1<0, x2>=0),
// 2 = (x1>=0, x2<0), 3 = (x1>=0, x2>=0).
std::size_t quadrant_index(const Context& x) noexcept;

// Bernoulli rewards whose success probability depends on the action and the
// sign quadrant of (x1, x2) only.
class PiecewiseBernoulliEnvironment final : public Environment {
 public:
  using QuadrantMeans = std::array<double, 4>;

  PiecewiseBernoulliEnvironment(std::vector<QuadrantMeans> arm_means,
                                std::size_t dimension = 4,
                                std::string id = "piecewise_bernoulli");

  std::string_view id() const noexcept override { return id_; }
  ActionCount action_count() const noexcept override { return ActionCount(means_.size()); }
  std::size_t dimension() const noexcept override { return dimension_; }

  double true_mean(std::size_t action, const Context& x) const override;
  double sample_reward(std::size_t action, const Context& x, Rng& rng) const override;

  // Exact: contexts are standard normal, so each quadrant has probability 1/4.
  OracleValue optimal_value() const override;

  const std::vector<QuadrantMeans>& arm_means() const noexcept { return means_; }

 private:
  std::vector<QuadrantMeans> means_;
  std::size_t dimension_;
  std::string id_;
};

// Rewards mu_a(x) + sigma * eta with eta standard normal and mu_a affine:
// mu_a(x) = c_a0 + sum_i c_ai x_i.
class LinearGaussianEnvironment final : public Environment {
 public:
  LinearGaussianEnvironment(std::vector<std::vector<double>> arm_coefficients,
                            double noise_sd = 1.0,
                            std::string id = "linear_gaussian");

  std::string_view id() const noexcept override { return id_; }
  ActionCount action_count() const noexcept override { return ActionCount(coefficients_.size()); }
  std::size_t dimension() const noexcept override { return dimension_; }

  double true_mean(std::size_t action, const Context& x) const override;
  double sample_reward(std::size_t action, const Context& x, Rng& rng) const override;

  // Monte-Carlo with kOracleSamples contexts from kOracleSeed, computed once.
  OracleValue optimal_value() const override;

  const std::vector<std::vector<double>>& arm_coefficients() const noexcept { return coefficients_; }
  double noise_sd() const noexcept { return noise_sd_; }

 private:
  std::vector<std::vector<double>> coefficients_;
  std::size_t dimension_;
  double noise_sd_;
  std::string id_;
  mutable std::once_flag oracle_once_;
  mutable OracleValue oracle_;
};

// Environment 1: Bernoulli rewards, quadrant means
//   arm 1: (0.1, 0.5, 0.7, 0.45), arm 2: (0.8, 0.1, 0.3, 0.6).
std::unique_ptr<PiecewiseBernoulliEnvironment> make_env1();

// Environment 2: Gaussian rewards with
//   mu_1(x) = 0.9 + 0.5x1 + 0.3x2 - 0.9x3 - 0.2x4,
//   mu_2(x) = 0.9 - 0.5x1 + 0.1x2 - 0.7x3 + 0.6x4.
std::unique_ptr<LinearGaussianEnvironment> make_env2();

double env1_true_mean(std::size_t action, const Context& x);
double env2_true_mean(std::size_t action, const Context& x);

// Environment description as read from a config file or the CLI.
struct EnvironmentSpec {
  std::string kind = "env1";  // env1 | env2 | piecewise_bernoulli | linear_gaussian
  std::vector<std::vector<double>> arms;  // quadrant means or coefficients
  std::size_t dimension = 4;
  double noise_sd = 1.0;
  // Learner ids whose policy class contains the optimal policy; empty means
  // the preset default (env1: epsgreedy, env2: linucb).
  std::vector<std::string> optimal_learners;
};

std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec);
std::vector<std::string> default_optimal_learners(const EnvironmentSpec& spec);

// Best value over policies that are constant on each (x1, x2) sign quadrant.
// Exact for piecewise environments; Monte-Carlo per quadrant otherwise.
OracleValue quadrant_class_value(const Environment& env,
                                 std::size_t samples = kOracleSamples,
                                 std::uint64_t seed = kOracleSeed);

}  // namespace ensbfc
