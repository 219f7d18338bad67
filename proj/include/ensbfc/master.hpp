#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ensbfc/environment.hpp"
#include "ensbfc/learners.hpp"
#include "ensbfc/random.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

struct MasterConfig {
  double c1 = 0.5;  // selector bonus coefficient
  double c2 = 10.0; // exploration coefficient
  // Rate exponents beta_j in learner order; filled from the learners when empty.
  std::vector<double> beta;
  // Risk estimates from exploration-round rewards only (default: all rounds).
  bool exploration_only_risk = false;

  double beta_bar() const;
  void validate() const;  // throws ConfigError
};

// p_t = min(1, c2 * t^(-beta_bar)) for t >= 1.
double exploration_probability(std::uint64_t t, double c2, double beta_bar);

// argmin_j risks[j] + c1 * n^(-beta[j]), lowest index on ties. At n = 0 the
// bonus is undefined and the first learner is returned.
std::size_t select_candidate(std::uint64_t n, std::span<const double> risks,
                             std::span<const double> beta, double c1);

// Per-learner counters and reward histories of one master run.
class MasterState {
 public:
  explicit MasterState(std::size_t learner_count);

  std::size_t learner_count() const noexcept { return ledgers_.size(); }
  std::uint64_t global_time() const noexcept { return t_; }

  std::uint64_t internal_time(std::size_t j) const { return ledgers_.at(j).rewards.size(); }
  std::uint64_t exploration_count(std::size_t j) const { return ledgers_.at(j).explorations; }
  std::uint64_t exploitation_count(std::size_t j) const {
    return internal_time(j) - exploration_count(j);
  }

  std::uint64_t min_internal_time() const noexcept;
  std::uint64_t min_exploration_time() const noexcept;

  // -(1/n) * (sum of learner j's first n rewards); 0 at n = 0.
  double risk_estimate(std::size_t j, std::uint64_t n) const;
  // Same over learner j's first n exploration-round rewards.
  double exploration_risk_estimate(std::size_t j, std::uint64_t n) const;

  std::span<const double> rewards(std::size_t j) const { return ledgers_.at(j).rewards; }

  void record(std::size_t j, bool exploration, double reward);

 private:
  struct Ledger {
    std::uint64_t explorations = 0;
    std::vector<double> rewards;
    std::vector<double> prefix{0.0};
    std::vector<double> exploration_prefix{0.0};
  };

  std::uint64_t t_ = 0;
  std::vector<Ledger> ledgers_;
};

struct RoundDecision {
  bool exploration = false;
  std::size_t selected = 0;          // 0-based learner index
  std::uint64_t comparison_n = 0;    // 0 on exploration rounds
};

struct RoundOutcome {
  RoundDecision decision;
  Observation observation;
  double expected_reward = 0.0;      // sum_a pi(a|x) mu_a(x) of the played policy
};

// Ensembling by fair comparison: explore uniformly over learners with
// probability p_t, otherwise follow the learner with the best bonus-adjusted
// risk on reward prefixes of equal length min_j n^xplr(j, t).
class Master {
 public:
  Master(MasterConfig config, std::vector<std::unique_ptr<BanditLearner>> learners);

  const MasterConfig& config() const noexcept { return config_; }
  const MasterState& state() const noexcept { return state_; }
  std::size_t learner_count() const noexcept { return learners_.size(); }
  const BanditLearner& learner(std::size_t j) const { return *learners_.at(j); }

  // Exploration draw and candidate selection for the next round.
  RoundDecision decide(Rng& master_rng) const;

  // Plays one round: decide, observe the context, act with the selected
  // learner's current policy, and feed the triple to that learner only.
  RoundOutcome step(const Environment& env, RunStreams& streams);

  // Decisions of every round played so far, in order.
  const std::vector<RoundDecision>& selection_trace() const noexcept { return trace_; }

  // Selector output at common internal time n (n <= min_j n(j, t)).
  std::size_t selector_at(std::uint64_t n) const;

 private:
  MasterConfig config_;
  std::vector<std::unique_ptr<BanditLearner>> learners_;
  MasterState state_;
  std::vector<RoundDecision> trace_;
};

}  // namespace ensbfc
