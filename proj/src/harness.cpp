#include "ensbfc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ensbfc/value.hpp"

namespace ensbfc {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Evaluates fn(0..n-1) on a worker pool; results are stored by index, so the
// output does not depend on scheduling.
template <class Fn>
auto parallel_map(std::size_t n, std::size_t threads, Fn fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<double> cumulative(std::span<const double> values) {
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (sum += values[i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (runs < 1) throw ConfigError("run count must be at least 1");
  if (learners.empty()) throw ConfigError("at least one learner is required");
  if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("experiment name must be a plain file-name stem");
  }
}

// ---------------------------------------------------------------------------

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)), env_(make_environment(config_.environment)) {
  config_.validate();
  master_ = config_.master;
  if (master_.beta.empty()) {
    for (std::size_t j = 0; j < learner_count(); ++j) {
      master_.beta.push_back(make_learner(j)->rate_exponent());
    }
  }
  if (master_.beta.size() != learner_count()) {
    throw ConfigError("number of rate exponents does not match number of learners");
  }
  master_.validate();
}

std::unique_ptr<BanditLearner> Experiment::make_learner(std::size_t j) const {
  return ensbfc::make_learner(config_.learners.at(j), env_->action_count(), env_->dimension());
}

std::vector<std::unique_ptr<BanditLearner>> Experiment::make_learners() const {
  std::vector<std::unique_ptr<BanditLearner>> out;
  for (std::size_t j = 0; j < learner_count(); ++j) out.push_back(make_learner(j));
  return out;
}

std::string Experiment::learner_label(std::size_t j) const {
  const auto& id = config_.learners.at(j).id;
  const auto same = std::count_if(config_.learners.begin(), config_.learners.end(),
                                  [&](const LearnerSpec& s) { return s.id == id; });
  return same > 1 ? id + "_" + std::to_string(j + 1) : id;
}

std::vector<std::string> Experiment::policy_labels() const {
  std::vector<std::string> labels{"master"};
  for (std::size_t j = 0; j < learner_count(); ++j) labels.push_back(learner_label(j));
  return labels;
}

double Experiment::optimal_value() const { return env_->optimal_value().value; }

std::vector<std::size_t> Experiment::optimal_set() const {
  const auto declared = default_optimal_learners(config_.environment);
  std::vector<std::size_t> set;
  for (std::size_t j = 0; j < learner_count(); ++j) {
    if (std::find(declared.begin(), declared.end(), config_.learners[j].id) != declared.end()) {
      set.push_back(j);
    }
  }
  if (set.empty()) {
    for (std::size_t j = 0; j < learner_count(); ++j) set.push_back(j);
  }
  return set;
}

double Experiment::reference_risk(std::size_t j) const {
  const auto set = optimal_set();
  const bool realizable = std::find(set.begin(), set.end(), j) != set.end();
  if (!realizable && config_.learners.at(j).id == "epsgreedy") {
    return -quadrant_class_value(*env_).value;
  }
  return -optimal_value();
}

// ---------------------------------------------------------------------------

std::vector<TraceRow> trace_rows(const RunRecord& record, std::uint64_t run_id,
                                 const std::string& policy, std::size_t learner_count,
                                 bool standalone) {
  std::vector<TraceRow> rows;
  rows.reserve(record.rounds());
  std::vector<std::uint64_t> n(learner_count, 0), nxplr(learner_count, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < record.rounds(); ++i) {
    const auto& d = record.decisions[i];
    ++n.at(d.selected);
    if (d.exploration) ++nxplr[d.selected];
    total += record.rewards[i];

    TraceRow row;
    row.run_id = run_id;
    row.policy = policy;
    row.t = i + 1;
    row.exploration = standalone ? false : d.exploration;
    row.selected = d.selected;
    row.comparison_n = d.comparison_n;
    row.action = record.actions[i];
    row.reward = record.rewards[i];
    row.cumulative_reward = total;
    row.internal_times = n;
    row.exploration_counts = nxplr;
    if (!record.contexts.empty()) {
      const auto v = record.contexts[i].values();
      row.context.assign(v.begin(), v.end());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> run_one(const ExperimentConfig& config, std::uint64_t run_id) {
  const Experiment exp(config);
  const auto& env = exp.environment();
  const auto labels = exp.policy_labels();
  const auto streams = RunStreams::for_run(config.seed, run_id);

  RunRecord master_record;
  run_master(env, exp.master_config(), exp.make_learners(), config.horizon, streams,
             &master_record, config.include_contexts);
  auto rows = trace_rows(master_record, run_id, labels[0], exp.learner_count(), false);

  for (std::size_t j = 0; j < exp.learner_count(); ++j) {
    auto learner = exp.make_learner(j);
    const auto record =
        simulate_standalone(env, *learner, config.horizon, streams, j, config.include_contexts);
    auto more = trace_rows(record, run_id, labels[j + 1], exp.learner_count(), true);
    rows.insert(rows.end(), std::make_move_iterator(more.begin()),
                std::make_move_iterator(more.end()));
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::size_t ReplicationResult::policy_index(const std::string& label) const {
  const auto it = std::find(policies.begin(), policies.end(), label);
  if (it == policies.end()) throw std::out_of_range("no policy labelled '" + label + "'");
  return static_cast<std::size_t>(it - policies.begin());
}

std::vector<double> ReplicationResult::mean_regret_curve(std::size_t policy, double v_star) const {
  if (runs.empty()) return {};
  const std::size_t horizon = runs.front().cumulative_rewards.at(policy).size();
  std::vector<double> curve(horizon, 0.0);
  for (const auto& run : runs) {
    const auto& cum = run.cumulative_rewards.at(policy);
    for (std::size_t i = 0; i < horizon; ++i) {
      curve[i] += static_cast<double>(i + 1) * v_star - cum[i];
    }
  }
  for (auto& v : curve) v /= static_cast<double>(runs.size());
  return curve;
}

double ReplicationResult::mean_final_cumulative(std::size_t policy) const {
  std::vector<double> finals;
  for (const auto& run : runs) finals.push_back(run.cumulative_rewards.at(policy).back());
  return stable_mean(finals);
}

ReplicationResult replicate(const ExperimentConfig& config, const ReplicateOptions& options) {
  const Experiment exp(config);
  const auto& env = exp.environment();
  const std::size_t j_count = exp.learner_count();

  ReplicationResult result;
  result.policies = exp.policy_labels();
  if (!options.standalone) result.policies.resize(1);

  result.runs = parallel_map(config.runs, config.threads, [&](std::size_t run) {
    const auto streams = RunStreams::for_run(config.seed, run);
    RunSummary summary;
    RunRecord record;
    const Master master =
        run_master(env, exp.master_config(), exp.make_learners(), config.horizon, streams, &record);
    summary.cumulative_rewards.push_back(cumulative(record.rewards));
    const auto& state = master.state();
    for (std::size_t j = 0; j < j_count; ++j) {
      summary.exploration_counts.push_back(state.exploration_count(j));
      summary.internal_times.push_back(state.internal_time(j));
    }
    for (std::uint64_t n : options.selection_grid) {
      const auto reached = exp.master_config().exploration_only_risk ? state.min_exploration_time()
                                                                     : state.min_internal_time();
      summary.selections.push_back(n <= reached ? master.selector_at(n) : kNone);
    }
    if (options.standalone) {
      for (std::size_t j = 0; j < j_count; ++j) {
        auto learner = exp.make_learner(j);
        const auto alone = simulate_standalone(env, *learner, config.horizon, streams, j);
        summary.cumulative_rewards.push_back(cumulative(alone.rewards));
      }
    }
    return summary;
  });

  const std::size_t horizon = config.horizon;
  result.rows.resize(horizon);
  std::vector<double> column(config.runs);
  for (std::size_t i = 0; i < horizon; ++i) {
    auto& row = result.rows[i];
    row.t = i + 1;
    for (std::size_t p = 0; p < result.policies.size(); ++p) {
      for (std::size_t r = 0; r < config.runs; ++r) {
        column[r] = result.runs[r].cumulative_rewards[p][i];
      }
      row.policies.push_back(summarize(column));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<double> pseudo_regret_curve(std::span<const double> rewards, double v_star) {
  std::vector<double> curve(rewards.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) curve[i] = (total += v_star - rewards[i]);
  return curve;
}

std::vector<std::uint64_t> dyadic_grid(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> grid;
  if (first < 1) first = 1;
  std::uint64_t n = 1;
  while (n < first) n *= 2;
  for (; n <= last; n *= 2) grid.push_back(n);
  if (last >= first && (grid.empty() || grid.back() != last)) grid.push_back(last);
  return grid;
}

RateFit fit_power_law(std::span<const std::uint64_t> n, std::span<const double> values) {
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      fit.used.push_back(n[i]);
      lx.push_back(std::log(static_cast<double>(n[i])));
      ly.push_back(std::log(values[i]));
    } else {
      fit.excluded.push_back(n[i]);
    }
  }
  if (lx.size() < 2) {
    throw std::domain_error("rate fit needs at least two grid points with positive regret");
  }
  const auto line = least_squares_line(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  return fit;
}

RateFit fit_rate_exponent(std::span<const double> curve, std::uint64_t burn_in) {
  const auto grid = dyadic_grid(burn_in, curve.size());
  std::vector<double> per_round;
  for (auto t : grid) per_round.push_back(curve[t - 1] / static_cast<double>(t));
  return fit_power_law(grid, per_round);
}

double last_decile_regret(std::span<const double> curve) {
  if (curve.empty()) throw std::invalid_argument("empty regret curve");
  const std::size_t horizon = curve.size();
  const std::size_t window = std::max<std::size_t>(horizon / 10, 1);
  const double before = horizon > window ? curve[horizon - window - 1] : 0.0;
  return (curve[horizon - 1] - before) / static_cast<double>(window);
}

// ---------------------------------------------------------------------------

std::vector<DeviationThreshold> default_deviation_thresholds() {
  return {{0.0, 0.05}, {0.0, 0.1}, {0.5, 0.0}, {1.0, 0.0}};
}

DeviationTable deviation_diagnostic(const ExperimentConfig& config, std::size_t learner,
                                    std::span<const std::uint64_t> grid,
                                    std::vector<DeviationThreshold> thresholds) {
  const Experiment exp(config);
  if (learner >= exp.learner_count()) throw std::out_of_range("learner index out of range");
  if (grid.empty()) throw std::invalid_argument("deviation grid is empty");
  const auto& env = exp.environment();
  const std::uint64_t horizon = *std::max_element(grid.begin(), grid.end());

  DeviationTable table;
  table.learner = exp.learner_label(learner);
  table.reference_risk = exp.reference_risk(learner);
  table.beta = exp.master_config().beta[learner];
  table.thresholds = std::move(thresholds);

  // excess[run][grid index]
  const auto excess = parallel_map(config.runs, config.threads, [&](std::size_t run) {
    auto l = exp.make_learner(learner);
    const auto record =
        simulate_standalone(env, *l, horizon, RunStreams::for_run(config.seed, run), learner);
    const auto values = cumulative(record.expected_rewards);
    std::vector<double> out;
    for (auto n : grid) {
      const double mean_risk = -values[n - 1] / static_cast<double>(n);
      out.push_back(mean_risk - table.reference_risk);
    }
    return out;
  });

  for (std::size_t g = 0; g < grid.size(); ++g) {
    DeviationRow row;
    row.n = grid[g];
    row.runs = config.runs;
    RunningMean acc;
    std::vector<std::size_t> exceed(table.thresholds.size(), 0);
    for (const auto& run : excess) {
      acc.add(run[g]);
      for (std::size_t k = 0; k < table.thresholds.size(); ++k) {
        const auto& th = table.thresholds[k];
        if (run[g] >= th.c0 * std::pow(static_cast<double>(row.n), -table.beta) + th.x) ++exceed[k];
      }
    }
    row.mean_excess = acc.mean();
    row.std_error = acc.std_error();
    for (auto c : exceed) {
      row.exceed_frequency.push_back(static_cast<double>(c) / static_cast<double>(config.runs));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------

SelectionTable selection_table(const Experiment& experiment, const ReplicationResult& result,
                               std::span<const std::uint64_t> grid) {
  SelectionTable table;
  for (std::size_t j = 0; j < experiment.learner_count(); ++j) {
    table.learners.push_back(experiment.learner_label(j));
  }
  table.optimal_set = experiment.optimal_set();
  const auto optimal = [&](std::size_t j) {
    return std::find(table.optimal_set.begin(), table.optimal_set.end(), j) !=
           table.optimal_set.end();
  };
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SelectionRow row;
    row.n = grid[g];
    std::vector<std::size_t> counts(experiment.learner_count(), 0);
    std::size_t suboptimal = 0;
    for (const auto& run : result.runs) {
      const std::size_t j = run.selections.at(g);
      if (j == kNone) continue;
      ++row.runs;
      ++counts[j];
      if (!optimal(j)) ++suboptimal;
    }
    const double denom = row.runs > 0 ? static_cast<double>(row.runs) : 1.0;
    row.suboptimal_frequency = static_cast<double>(suboptimal) / denom;
    for (auto c : counts) row.learner_frequency.push_back(static_cast<double>(c) / denom);
    table.rows.push_back(std::move(row));
  }
  return table;
}

SelectionTable suboptimal_selection_diagnostic(const ExperimentConfig& config,
                                               std::span<const std::uint64_t> grid) {
  const Experiment exp(config);
  ReplicateOptions options;
  options.standalone = false;
  options.selection_grid.assign(grid.begin(), grid.end());
  const auto result = replicate(config, options);
  return selection_table(exp, result, grid);
}

}  // namespace ensbfc
