#pragma once

#include <cstddef>

#include "ensbfc/environment.hpp"
#include "ensbfc/policy.hpp"
#include "ensbfc/random.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

// Uniform reference policy: 1/K for every action and context.
double reference_policy_prob(std::size_t action, const Context& x, ActionCount k);

// Importance-weighted negative reward: -y * pi(a | x) / pi_ref(a | x).
double value_loss(const Policy& pi, const Observation& o, ActionCount k);

// sum_a pi(a | x) * mu_a(x): expected reward of pi at a fixed context.
double conditional_value(const Policy& pi, const Environment& env, const Context& x);

struct ValueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo value over m contexts drawn from the environment, averaging
// true conditional means (no reward noise).
ValueEstimate policy_value(const Policy& pi, const Environment& env, std::size_t m, Rng& rng);

// Negated policy_value on the same draws.
ValueEstimate policy_risk(const Policy& pi, const Environment& env, std::size_t m, Rng& rng);

// Policy that always plays the action with the largest true mean.
GreedyPolicy optimal_policy(const Environment& env);

}  // namespace ensbfc
