#include "ensbfc/value.hpp"

#include <stdexcept>
#include <vector>

#include "ensbfc/statistics.hpp"

namespace ensbfc {

double reference_policy_prob(std::size_t action, const Context&, ActionCount k) {
  check_action(action, k);
  return 1.0 / static_cast<double>(k.value());
}

double value_loss(const Policy& pi, const Observation& o, ActionCount k) {
  if (pi.action_count() != k.value()) {
    throw std::invalid_argument("policy and observation disagree on K");
  }
  const double ratio =
      pi.prob(o.action, o.context) / reference_policy_prob(o.action, o.context, k);
  return -o.reward * ratio;
}

double conditional_value(const Policy& pi, const Environment& env, const Context& x) {
  const std::size_t k = env.action_count().value();
  std::vector<double> p(k);
  pi.distribution(x, p);
  double value = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (p[a] != 0.0) value += p[a] * env.true_mean(a, x);
  }
  return value;
}

ValueEstimate policy_value(const Policy& pi, const Environment& env, std::size_t m, Rng& rng) {
  if (m == 0) throw std::domain_error("policy_value needs at least one sample");
  if (pi.action_count() != env.action_count().value()) {
    throw std::invalid_argument("policy and environment disagree on K");
  }
  RunningMean acc;
  for (std::size_t i = 0; i < m; ++i) {
    acc.add(conditional_value(pi, env, env.sample_context(rng)));
  }
  return ValueEstimate{acc.mean(), acc.std_error(), m};
}

ValueEstimate policy_risk(const Policy& pi, const Environment& env, std::size_t m, Rng& rng) {
  auto v = policy_value(pi, env, m, rng);
  v.mean = -v.mean;
  return v;
}

GreedyPolicy optimal_policy(const Environment& env) {
  return GreedyPolicy(env.action_count(), [&env](const Context& x, std::span<double> scores) {
    for (std::size_t a = 0; a < scores.size(); ++a) scores[a] = env.true_mean(a, x);
  });
}

}  // namespace ensbfc
