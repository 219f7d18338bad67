#include "ensbfc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ensbfc/statistics.hpp"

namespace ensbfc {

Context Environment::sample_context(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(dimension());
  for (auto& v : x) v = normal(rng);
  return Context(std::move(x));
}

std::size_t Environment::best_action(const Context& x) const {
  const std::size_t k = action_count().value();
  std::size_t best = 0;
  double best_mean = true_mean(0, x);
  for (std::size_t a = 1; a < k; ++a) {
    const double m = true_mean(a, x);
    if (m > best_mean) {
      best = a;
      best_mean = m;
    }
  }
  return best;
}

std::size_t quadrant_index(const Context& x) noexcept {
  const bool x1_nonneg = x[0] >= 0.0;
  const bool x2_nonneg = x[1] >= 0.0;
  return (x1_nonneg ? 2u : 0u) + (x2_nonneg ? 1u : 0u);
}

// ---------------------------------------------------------------------------

PiecewiseBernoulliEnvironment::PiecewiseBernoulliEnvironment(
    std::vector<QuadrantMeans> arm_means, std::size_t dimension, std::string id)
    : means_(std::move(arm_means)), dimension_(dimension), id_(std::move(id)) {
  ActionCount{means_.size()};
  if (dimension_ < 2) {
    throw std::domain_error("piecewise environment needs dimension >= 2");
  }
  for (const auto& arm : means_) {
    for (double p : arm) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("Bernoulli means must lie in [0, 1]");
      }
    }
  }
}

double PiecewiseBernoulliEnvironment::true_mean(std::size_t action,
                                                const Context& x) const {
  check_action(action, action_count());
  return means_[action][quadrant_index(x)];
}

double PiecewiseBernoulliEnvironment::sample_reward(std::size_t action,
                                                    const Context& x,
                                                    Rng& rng) const {
  return uniform01(rng) < true_mean(action, x) ? 1.0 : 0.0;
}

OracleValue PiecewiseBernoulliEnvironment::optimal_value() const {
  double total = 0.0;
  for (std::size_t q = 0; q < 4; ++q) {
    double best = means_[0][q];
    for (const auto& arm : means_) best = std::max(best, arm[q]);
    total += best;
  }
  return OracleValue{0.25 * total, "exact", 0, 0, 0.0};
}

// ---------------------------------------------------------------------------

LinearGaussianEnvironment::LinearGaussianEnvironment(
    std::vector<std::vector<double>> arm_coefficients, double noise_sd,
    std::string id)
    : coefficients_(std::move(arm_coefficients)),
      dimension_(0),
      noise_sd_(noise_sd),
      id_(std::move(id)) {
  ActionCount{coefficients_.size()};
  if (coefficients_.front().size() < 2) {
    throw std::domain_error("linear arm needs an intercept and at least one slope");
  }
  dimension_ = coefficients_.front().size() - 1;
  for (const auto& arm : coefficients_) {
    if (arm.size() != dimension_ + 1) {
      throw std::domain_error("all arms need the same number of coefficients");
    }
  }
  if (!(noise_sd_ >= 0.0) || !std::isfinite(noise_sd_)) {
    throw std::domain_error("noise standard deviation must be finite and >= 0");
  }
}

double LinearGaussianEnvironment::true_mean(std::size_t action,
                                            const Context& x) const {
  check_action(action, action_count());
  const auto& c = coefficients_[action];
  double mu = c[0];
  for (std::size_t i = 0; i < dimension_; ++i) mu += c[i + 1] * x[i];
  return mu;
}

double LinearGaussianEnvironment::sample_reward(std::size_t action,
                                                const Context& x,
                                                Rng& rng) const {
  std::normal_distribution<double> noise(0.0, noise_sd_);
  return true_mean(action, x) + noise(rng);
}

OracleValue LinearGaussianEnvironment::optimal_value() const {
  std::call_once(oracle_once_, [this] {
    Rng rng(kOracleSeed);
    RunningMean acc;
    const std::size_t k = coefficients_.size();
    for (std::size_t i = 0; i < kOracleSamples; ++i) {
      const Context x = sample_context(rng);
      double best = true_mean(0, x);
      for (std::size_t a = 1; a < k; ++a) best = std::max(best, true_mean(a, x));
      acc.add(best);
    }
    oracle_ = OracleValue{acc.mean(), "monte-carlo", kOracleSamples, kOracleSeed,
                          acc.std_error()};
  });
  return oracle_;
}

// ---------------------------------------------------------------------------

std::unique_ptr<PiecewiseBernoulliEnvironment> make_env1() {
  return std::make_unique<PiecewiseBernoulliEnvironment>(
      std::vector<PiecewiseBernoulliEnvironment::QuadrantMeans>{
          {0.1, 0.5, 0.7, 0.45},
          {0.8, 0.1, 0.3, 0.6},
      },
      4, "env1");
}

std::unique_ptr<LinearGaussianEnvironment> make_env2() {
  return std::make_unique<LinearGaussianEnvironment>(
      std::vector<std::vector<double>>{
          {0.9, 0.5, 0.3, -0.9, -0.2},
          {0.9, -0.5, 0.1, -0.7, 0.6},
      },
      1.0, "env2");
}

namespace {

void check_env_action(std::size_t action) {
  if (action > 1) {
    throw std::domain_error("preset environments have actions {1, 2}");
  }
}

}  // namespace

double env1_true_mean(std::size_t action, const Context& x) {
  check_env_action(action);
  static const auto env = make_env1();
  return env->true_mean(action, x);
}

double env2_true_mean(std::size_t action, const Context& x) {
  check_env_action(action);
  static const auto env = make_env2();
  return env->true_mean(action, x);
}

std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec) {
  if (spec.kind == "env1") return make_env1();
  if (spec.kind == "env2") return make_env2();
  if (spec.kind == "piecewise_bernoulli") {
    std::vector<PiecewiseBernoulliEnvironment::QuadrantMeans> arms;
    for (const auto& arm : spec.arms) {
      if (arm.size() != 4) {
        throw ConfigError("piecewise_bernoulli arms need exactly 4 quadrant means");
      }
      arms.push_back({arm[0], arm[1], arm[2], arm[3]});
    }
    if (arms.size() < 2) throw ConfigError("environment needs at least 2 arms");
    try {
      return std::make_unique<PiecewiseBernoulliEnvironment>(std::move(arms),
                                                            spec.dimension);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  if (spec.kind == "linear_gaussian") {
    if (spec.arms.size() < 2) throw ConfigError("environment needs at least 2 arms");
    try {
      return std::make_unique<LinearGaussianEnvironment>(spec.arms, spec.noise_sd);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown environment '" + spec.kind + "'");
}

std::vector<std::string> default_optimal_learners(const EnvironmentSpec& spec) {
  if (!spec.optimal_learners.empty()) return spec.optimal_learners;
  if (spec.kind == "env1") return {"epsgreedy"};
  if (spec.kind == "env2") return {"linucb"};
  return {};
}

OracleValue quadrant_class_value(const Environment& env, std::size_t samples,
                                 std::uint64_t seed) {
  if (const auto* piecewise = dynamic_cast<const PiecewiseBernoulliEnvironment*>(&env)) {
    return piecewise->optimal_value();
  }
  const std::size_t k = env.action_count().value();
  std::vector<double> sums(4 * k, 0.0);
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Context x = env.sample_context(rng);
    const std::size_t q = quadrant_index(x);
    for (std::size_t a = 0; a < k; ++a) sums[q * k + a] += env.true_mean(a, x);
  }
  double total = 0.0;
  for (std::size_t q = 0; q < 4; ++q) {
    total += *std::max_element(sums.begin() + static_cast<std::ptrdiff_t>(q * k),
                               sums.begin() + static_cast<std::ptrdiff_t>((q + 1) * k));
  }
  return OracleValue{total / static_cast<double>(samples), "monte-carlo", samples, seed, 0.0};
}

}  // namespace ensbfc
