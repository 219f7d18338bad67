#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "ensbfc/environment.hpp"
#include "ensbfc/learners.hpp"
#include "ensbfc/master.hpp"
#include "ensbfc/random.hpp"

namespace ensbfc {

// Column-oriented record of one simulated run.
struct RunRecord {
  std::vector<RoundDecision> decisions;
  std::vector<std::size_t> actions;
  std::vector<double> rewards;
  std::vector<double> expected_rewards;  // value of the played policy at X(t)
  std::vector<Context> contexts;         // empty unless requested

  std::size_t rounds() const noexcept { return rewards.size(); }
  void reserve(std::size_t n);
};

// Plays the master for `horizon` rounds. The returned master keeps its final
// state, learners and selection trace; `record` receives per-round columns.
Master run_master(const Environment& env, const MasterConfig& config,
                  std::vector<std::unique_ptr<BanditLearner>> learners,
                  std::uint64_t horizon, RunStreams streams, RunRecord* record = nullptr,
                  bool keep_contexts = false);

// Runs one learner alone for `horizon` rounds with the master's stream
// layout minus the master draws. Decisions carry selected = `label_index`.
RunRecord simulate_standalone(const Environment& env, BanditLearner& learner,
                              std::uint64_t horizon, RunStreams streams,
                              std::size_t label_index = 0, bool keep_contexts = false);

}  // namespace ensbfc
