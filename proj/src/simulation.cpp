#include "ensbfc/simulation.hpp"

#include "ensbfc/value.hpp"

namespace ensbfc {

void RunRecord::reserve(std::size_t n) {
  decisions.reserve(n);
  actions.reserve(n);
  rewards.reserve(n);
  expected_rewards.reserve(n);
}

Master run_master(const Environment& env, const MasterConfig& config,
                  std::vector<std::unique_ptr<BanditLearner>> learners,
                  std::uint64_t horizon, RunStreams streams, RunRecord* record,
                  bool keep_contexts) {
  Master master(config, std::move(learners));
  if (record) record->reserve(horizon);
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    RoundOutcome out = master.step(env, streams);
    if (!record) continue;
    record->decisions.push_back(out.decision);
    record->actions.push_back(out.observation.action);
    record->rewards.push_back(out.observation.reward);
    record->expected_rewards.push_back(out.expected_reward);
    if (keep_contexts) record->contexts.push_back(std::move(out.observation.context));
  }
  return master;
}

RunRecord simulate_standalone(const Environment& env, BanditLearner& learner,
                              std::uint64_t horizon, RunStreams streams,
                              std::size_t label_index, bool keep_contexts) {
  RunRecord record;
  record.reserve(horizon);
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    Rng env_rng = streams.environment_round(t);
    Context x = env.sample_context(env_rng);
    const auto policy = learner.propose();
    const std::size_t action = policy->sample(x, streams.action);
    const double reward = env.sample_reward(action, x, env_rng);
    record.expected_rewards.push_back(conditional_value(*policy, env, x));
    record.decisions.push_back(RoundDecision{false, label_index, 0});
    record.actions.push_back(action);
    record.rewards.push_back(reward);
    Observation o{keep_contexts ? x : std::move(x), action, reward};
    learner.update(o);
    if (keep_contexts) record.contexts.push_back(std::move(o.context));
  }
  return record;
}

}  // namespace ensbfc
