#include "ensbfc/master.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ensbfc/value.hpp"

namespace ensbfc {

double MasterConfig::beta_bar() const {
  if (beta.empty()) throw ConfigError("master has no rate exponents");
  return *std::max_element(beta.begin(), beta.end());
}

void MasterConfig::validate() const {
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw ConfigError("c1 must be a positive real");
  if (!(c2 > 0.0) || !std::isfinite(c2)) throw ConfigError("c2 must be a positive real");
  if (beta.empty()) throw ConfigError("master needs at least one learner");
  for (double b : beta) {
    if (!(b > 0.0 && b <= 0.5)) {
      throw ConfigError("rate exponents must lie in (0, 1/2], got " + std::to_string(b));
    }
  }
}

double exploration_probability(std::uint64_t t, double c2, double beta_bar) {
  if (t < 1) throw std::domain_error("round index starts at 1");
  return std::min(1.0, c2 * std::pow(static_cast<double>(t), -beta_bar));
}

std::size_t select_candidate(std::uint64_t n, std::span<const double> risks,
                             std::span<const double> beta, double c1) {
  if (risks.size() != beta.size() || risks.empty()) {
    throw std::invalid_argument("selector needs one risk and one exponent per learner");
  }
  if (n == 0) return 0;
  const double dn = static_cast<double>(n);
  std::size_t best = 0;
  double best_score = risks[0] + c1 * std::pow(dn, -beta[0]);
  for (std::size_t j = 1; j < risks.size(); ++j) {
    const double score = risks[j] + c1 * std::pow(dn, -beta[j]);
    if (score < best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

MasterState::MasterState(std::size_t learner_count) : ledgers_(learner_count) {
  if (learner_count == 0) throw std::invalid_argument("master needs at least one learner");
}

std::uint64_t MasterState::min_internal_time() const noexcept {
  std::uint64_t m = ledgers_.front().rewards.size();
  for (const auto& l : ledgers_) m = std::min<std::uint64_t>(m, l.rewards.size());
  return m;
}

std::uint64_t MasterState::min_exploration_time() const noexcept {
  std::uint64_t m = ledgers_.front().explorations;
  for (const auto& l : ledgers_) m = std::min(m, l.explorations);
  return m;
}

double MasterState::risk_estimate(std::size_t j, std::uint64_t n) const {
  const auto& l = ledgers_.at(j);
  if (n > l.rewards.size()) {
    throw std::domain_error("risk estimate requested beyond the learner's internal time");
  }
  return n == 0 ? 0.0 : -l.prefix[n] / static_cast<double>(n);
}

double MasterState::exploration_risk_estimate(std::size_t j, std::uint64_t n) const {
  const auto& l = ledgers_.at(j);
  if (n > l.explorations) {
    throw std::domain_error("risk estimate requested beyond the learner's exploration count");
  }
  return n == 0 ? 0.0 : -l.exploration_prefix[n] / static_cast<double>(n);
}

void MasterState::record(std::size_t j, bool exploration, double reward) {
  auto& l = ledgers_.at(j);
  ++t_;
  l.rewards.push_back(reward);
  l.prefix.push_back(l.prefix.back() + reward);
  if (exploration) {
    ++l.explorations;
    l.exploration_prefix.push_back(l.exploration_prefix.back() + reward);
  }
#ifndef NDEBUG
  std::uint64_t total = 0;
  for (const auto& ledger : ledgers_) total += ledger.rewards.size();
  assert(total == t_);
#endif
}

// ---------------------------------------------------------------------------

Master::Master(MasterConfig config, std::vector<std::unique_ptr<BanditLearner>> learners)
    : config_(std::move(config)), learners_(std::move(learners)), state_(learners_.size()) {
  if (config_.beta.empty()) {
    for (const auto& l : learners_) config_.beta.push_back(l->rate_exponent());
  }
  if (config_.beta.size() != learners_.size()) {
    throw ConfigError("number of rate exponents does not match number of learners");
  }
  config_.validate();
  for (const auto& l : learners_) {
    if (l->action_count() != learners_.front()->action_count()) {
      throw ConfigError("learners disagree on the number of actions");
    }
  }
}

std::size_t Master::selector_at(std::uint64_t n) const {
  const std::size_t j_count = learners_.size();
  std::vector<double> risks(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    risks[j] = config_.exploration_only_risk ? state_.exploration_risk_estimate(j, n)
                                             : state_.risk_estimate(j, n);
  }
  return select_candidate(n, risks, config_.beta, config_.c1);
}

RoundDecision Master::decide(Rng& master_rng) const {
  const std::uint64_t t = state_.global_time() + 1;
  const double p = exploration_probability(t, config_.c2, config_.beta_bar());
  RoundDecision d;
  d.exploration = uniform01(master_rng) < p;
  if (d.exploration) {
    d.selected = uniform_index(master_rng, learners_.size());
  } else {
    d.comparison_n = state_.min_exploration_time();
    assert(d.comparison_n <= state_.min_internal_time());
    d.selected = selector_at(d.comparison_n);
  }
  return d;
}

RoundOutcome Master::step(const Environment& env, RunStreams& streams) {
  RoundOutcome out;
  out.decision = decide(streams.master);
  const std::uint64_t t = state_.global_time() + 1;

  Rng env_rng = streams.environment_round(t);
  Context x = env.sample_context(env_rng);
  auto& learner = *learners_[out.decision.selected];
  const auto policy = learner.propose();
  const std::size_t action = policy->sample(x, streams.action);
  const double reward = env.sample_reward(action, x, env_rng);
  out.expected_reward = conditional_value(*policy, env, x);

  out.observation = Observation{std::move(x), action, reward};
  learner.update(out.observation);
  state_.record(out.decision.selected, out.decision.exploration, reward);
  trace_.push_back(out.decision);
  return out;
}

}  // namespace ensbfc
