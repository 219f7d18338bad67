#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ensbfc/environment.hpp"
#include "ensbfc/learners.hpp"
#include "ensbfc/master.hpp"
#include "ensbfc/simulation.hpp"
#include "ensbfc/statistics.hpp"

namespace ensbfc {

enum class TraceGranularity { kFull, kAggregateOnly };

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentSpec environment;
  std::vector<LearnerSpec> learners{{"linucb", {}}, {"epsgreedy", {}}};
  MasterConfig master;
  std::uint64_t horizon = 10'000;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  TraceGranularity granularity = TraceGranularity::kFull;
  bool include_contexts = false;
  std::size_t threads = 0;  // 0: one per hardware thread

  void validate() const;  // throws ConfigError
};

// A validated configuration bound to its environment.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const noexcept { return config_; }
  const Environment& environment() const noexcept { return *env_; }
  std::size_t learner_count() const noexcept { return config_.learners.size(); }

  std::unique_ptr<BanditLearner> make_learner(std::size_t j) const;
  std::vector<std::unique_ptr<BanditLearner>> make_learners() const;

  // Master rate exponents in learner order.
  const MasterConfig& master_config() const noexcept { return master_; }

  // "master" followed by one label per learner (id, suffixed with its
  // 1-based position when ids repeat).
  std::vector<std::string> policy_labels() const;
  std::string learner_label(std::size_t j) const;

  // V*(E) used in regret curves: the optimal value of the environment.
  double optimal_value() const;

  // Indices of learners whose class contains the optimal policy. All
  // learners when none of the declared ids is present.
  std::vector<std::size_t> optimal_set() const;

  // R*_j: -V*(E) for learners in the optimal set; the best
  // constant-per-quadrant value for a misspecified epsgreedy; -V*(E) otherwise.
  double reference_risk(std::size_t j) const;

 private:
  ExperimentConfig config_;
  std::unique_ptr<Environment> env_;
  MasterConfig master_;
};

// One round of one simulated policy. Counter vectors have one entry per
// learner of the experiment; standalone rows count only their own learner.
struct TraceRow {
  std::uint64_t run_id = 0;
  std::string policy;
  std::uint64_t t = 0;
  bool exploration = false;
  std::size_t selected = 0;  // 0-based
  std::uint64_t comparison_n = 0;
  std::size_t action = 0;    // 0-based
  double reward = 0.0;
  double cumulative_reward = 0.0;
  std::vector<std::uint64_t> internal_times;
  std::vector<std::uint64_t> exploration_counts;
  std::vector<double> context;  // empty unless contexts were requested
};

std::vector<TraceRow> trace_rows(const RunRecord& record, std::uint64_t run_id,
                                 const std::string& policy, std::size_t learner_count,
                                 bool standalone);

// Master plus every learner standalone for T rounds, all under the streams
// of (seed, run_id). Rows are grouped by policy: master first.
std::vector<TraceRow> run_one(const ExperimentConfig& config, std::uint64_t run_id);

struct AggregateRow {
  std::uint64_t t = 0;
  std::vector<QuantileSummary> policies;  // mean / q10 / q90 of cumulative reward
};

struct RunSummary {
  std::vector<std::vector<double>> cumulative_rewards;  // [policy][t - 1]
  std::vector<std::uint64_t> exploration_counts;        // master n^xplr(j, T)
  std::vector<std::uint64_t> internal_times;            // master n(j, T)
  // Selector output at each requested n; npos when n > min_j n(j, T).
  std::vector<std::size_t> selections;
};

struct ReplicateOptions {
  bool standalone = true;                      // also simulate learners alone
  std::vector<std::uint64_t> selection_grid;  // n at which to evaluate j^(n)
};

struct ReplicationResult {
  std::vector<std::string> policies;
  std::vector<AggregateRow> rows;
  std::vector<RunSummary> runs;

  std::size_t policy_index(const std::string& label) const;
  // Mean over runs of the pseudo-regret curve of one policy.
  std::vector<double> mean_regret_curve(std::size_t policy, double v_star) const;
  double mean_final_cumulative(std::size_t policy) const;
};

ReplicationResult replicate(const ExperimentConfig& config, const ReplicateOptions& options = {});

// sum_{tau <= t} (v_star - rewards[tau]) for every t.
std::vector<double> pseudo_regret_curve(std::span<const double> rewards, double v_star);

// Powers of two in [first, last], plus `last` itself when it is not one.
std::vector<std::uint64_t> dyadic_grid(std::uint64_t first, std::uint64_t last);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::uint64_t> used;      // grid points in the fit
  std::vector<std::uint64_t> excluded;  // grid points with nonpositive regret
};

// Log-log least-squares slope of curve(t) / t on the dyadic grid from
// `burn_in` to the curve length. Throws if fewer than two points remain.
RateFit fit_rate_exponent(std::span<const double> curve, std::uint64_t burn_in = 64);

// Log-log slope of arbitrary (n, value) pairs, skipping nonpositive values.
RateFit fit_power_law(std::span<const std::uint64_t> n, std::span<const double> values);

// Average per-round regret over the last tenth of the curve.
double last_decile_regret(std::span<const double> curve);

struct DeviationThreshold {
  double c0 = 0.0;
  double x = 0.0;
};

struct DeviationRow {
  std::uint64_t n = 0;
  double mean_excess = 0.0;  // mean over runs of Rbar(j, n) - R*_j
  double std_error = 0.0;
  std::size_t runs = 0;
  std::vector<double> exceed_frequency;  // one per threshold
};

struct DeviationTable {
  std::string learner;
  double reference_risk = 0.0;
  double beta = 0.0;
  std::vector<DeviationThreshold> thresholds;
  std::vector<DeviationRow> rows;
};

std::vector<DeviationThreshold> default_deviation_thresholds();

// Runs learner j standalone config.runs times up to the largest grid point.
// Rbar(j, n) averages the true value of the proposed policies pi(j, 1..n),
// each evaluated at its round's fresh context.
DeviationTable deviation_diagnostic(const ExperimentConfig& config, std::size_t learner,
                                    std::span<const std::uint64_t> grid,
                                    std::vector<DeviationThreshold> thresholds);

struct SelectionRow {
  std::uint64_t n = 0;
  std::size_t runs = 0;  // runs in which every learner reached n
  double suboptimal_frequency = 0.0;
  std::vector<double> learner_frequency;
};

struct SelectionTable {
  std::vector<std::string> learners;
  std::vector<std::size_t> optimal_set;
  std::vector<SelectionRow> rows;
};

SelectionTable selection_table(const Experiment& experiment, const ReplicationResult& result,
                               std::span<const std::uint64_t> grid);

// Empirical P[j^(n) not in the optimal set] across config.runs master runs.
SelectionTable suboptimal_selection_diagnostic(const ExperimentConfig& config,
                                               std::span<const std::uint64_t> grid);

}  // namespace ensbfc
