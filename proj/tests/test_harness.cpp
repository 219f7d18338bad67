#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ensbfc/csv.hpp"
#include "ensbfc/harness.hpp"
#include "ensbfc/value.hpp"

using namespace ensbfc;

namespace {

ExperimentConfig small_config(const std::string& env, std::uint64_t horizon, std::size_t runs) {
  ExperimentConfig cfg;
  cfg.environment.kind = env;
  cfg.horizon = horizon;
  cfg.runs = runs;
  cfg.seed = 42;
  cfg.threads = 2;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ensbfc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run_one row layout") {
  auto cfg = small_config("env2", 10, 1);
  const auto rows = run_one(cfg, 0);
  REQUIRE(rows.size() == 30);
  CHECK(rows[0].policy == "master");
  CHECK(rows[10].policy == "linucb");
  CHECK(rows[20].policy == "epsgreedy");
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(rows[i].t == i + 1);
    std::uint64_t total = 0;
    for (auto n : rows[i].internal_times) total += n;
    CHECK(total == rows[i].t);
  }
  CHECK(rows[15].internal_times == std::vector<std::uint64_t>{6, 0});
  CHECK(rows[25].internal_times == std::vector<std::uint64_t>{0, 6});
  CHECK(rows[25].exploration_counts == std::vector<std::uint64_t>{0, 0});
}

TEST_CASE("single-learner experiment: master and standalone columns agree") {
  for (const char* env : {"env1", "env2"}) {
    auto cfg = small_config(env, 500, 1);
    cfg.learners = {{"epsgreedy", {}}};
    const auto rows = run_one(cfg, 3);
    REQUIRE(rows.size() == 1000);
    for (std::size_t i = 0; i < 500; ++i) {
      CHECK(rows[i].reward == rows[500 + i].reward);
      CHECK(rows[i].action == rows[500 + i].action);
    }
  }
}

TEST_CASE("trace CSV is byte-identical on rerun and passes validation") {
  const auto dir = scratch("trace");
  auto cfg = small_config("env1", 300, 1);
  cfg.include_contexts = true;
  write_trace_csv(dir / "a.csv", run_one(cfg, 1), 2);
  write_trace_csv(dir / "b.csv", run_one(cfg, 1), 2);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(validate_trace_csv(dir / "a.csv").empty());

  const auto table = read_csv(dir / "a.csv");
  CHECK(table.rows.size() == 900);
  CHECK(table.header.back() == "x_4");
  CHECK(table.header[table.column("n_1")] == "n_1");

  // A corrupted cumulative column must be reported.
  {
    std::ofstream bad(dir / "bad.csv", std::ios::binary);
    write_trace_header(bad, 2, 0);
    bad << "0,master,1,1,1,0,1,1,5,1,0,1,0\n";
  }
  const auto problems = validate_trace_csv(dir / "bad.csv");
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("prefix sum") != std::string::npos);
}

TEST_CASE("real numbers round-trip through the CSV format") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform_index(rng, 20)) - 10);
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("replicate aggregates") {
  auto cfg = small_config("env2", 200, 2);
  const auto result = replicate(cfg);
  REQUIRE(result.rows.size() == 200);
  REQUIRE(result.policies.size() == 3);
  for (std::size_t t = 0; t < 200; ++t) {
    for (std::size_t p = 0; p < 3; ++p) {
      const double a = result.runs[0].cumulative_rewards[p][t];
      const double b = result.runs[1].cumulative_rewards[p][t];
      const auto& s = result.rows[t].policies[p];
      CHECK(s.mean == doctest::Approx((a + b) / 2).epsilon(1e-14));
      CHECK(s.q10 <= s.mean);
      CHECK(s.mean <= s.q90);
      CHECK(s.q10 == doctest::Approx(std::min(a, b) + 0.1 * std::abs(a - b)).epsilon(1e-12));
    }
  }

  const auto one_thread = [&] {
    auto c = cfg;
    c.threads = 1;
    return replicate(c);
  }();
  CHECK(one_thread.runs[1].cumulative_rewards == result.runs[1].cumulative_rewards);
}

TEST_CASE("constant rewards collapse the quantile band") {
  auto cfg = small_config("piecewise_bernoulli", 100, 5);
  cfg.environment.arms = {{1, 1, 1, 1}, {1, 1, 1, 1}};
  const auto result = replicate(cfg);
  for (const auto& row : result.rows) {
    for (const auto& s : row.policies) {
      CHECK(s.q10 == s.mean);
      CHECK(s.q90 == s.mean);
      CHECK(s.mean == static_cast<double>(row.t));
    }
  }
}

TEST_CASE("aggregate CSV passes validation and is byte-identical on rerun") {
  const auto dir = scratch("agg");
  auto cfg = small_config("env1", 300, 6);
  write_aggregate_csv(dir / "a.csv", replicate(cfg));
  cfg.threads = 1;
  write_aggregate_csv(dir / "b.csv", replicate(cfg));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(validate_aggregate_csv(dir / "a.csv").empty());
  const auto table = read_csv(dir / "a.csv");
  CHECK(table.header.size() == 1 + 3 * 3);
  CHECK(table.header[1] == "master_mean");
}

TEST_CASE("pseudo-regret curve") {
  const std::vector<double> optimal(50, 0.65);
  for (double v : pseudo_regret_curve(optimal, 0.65)) CHECK(v == 0.0);
  Rng rng(3);
  std::vector<double> r(100);
  for (auto& y : r) y = uniform01(rng);
  const auto curve = pseudo_regret_curve(r, 0.65);
  CHECK(curve[0] == doctest::Approx(0.65 - r[0]));
  for (std::size_t t = 1; t < r.size(); ++t) {
    CHECK(curve[t] - curve[t - 1] == doctest::Approx(0.65 - r[t]).epsilon(1e-12));
  }
}

TEST_CASE("oracle policy has vanishing regret slope") {
  const auto env = make_env1();
  const auto pi = optimal_policy(*env);
  std::vector<double> mean_rewards(10000, 0.0);
  for (std::uint64_t run = 0; run < 20; ++run) {
    auto streams = RunStreams::for_run(1, run);
    for (std::uint64_t t = 1; t <= 10000; ++t) {
      Rng er = streams.environment_round(t);
      const Context x = env->sample_context(er);
      mean_rewards[t - 1] += conditional_value(pi, *env, x) / 20.0;
    }
  }
  const auto curve = pseudo_regret_curve(mean_rewards, 0.65);
  CHECK(std::abs(curve.back() / 10000.0) < 0.005);
}

TEST_CASE("rate fit recovers planted exponents") {
  for (double beta : {0.5, 1.0 / 3.0, 0.25, 0.1}) {
    std::vector<double> curve(20000);
    for (std::size_t t = 1; t <= curve.size(); ++t) {
      curve[t - 1] = 3.7 * std::pow(static_cast<double>(t), 1.0 - beta);
    }
    const auto fit = fit_rate_exponent(curve);
    CHECK(std::abs(fit.slope + beta) < 1e-6);
    CHECK(std::abs(fit.intercept - std::log(3.7)) < 1e-6);
    CHECK(fit.used.front() == 64);
    CHECK(fit.used.back() == 20000);
  }
  std::vector<double> with_gap(1024, 1.0);
  with_gap[127] = -1.0;
  const auto fit = fit_rate_exponent(with_gap);
  CHECK(fit.excluded == std::vector<std::uint64_t>{128});
  CHECK(std::abs(fit_power_law(std::vector<std::uint64_t>{1, 2}, std::vector<double>{1, 1}).slope) < 1e-15);
  std::vector<double> negative(100, -1.0);
  CHECK_THROWS(fit_rate_exponent(negative));
}

TEST_CASE("dyadic grid") {
  CHECK(dyadic_grid(64, 1000) == std::vector<std::uint64_t>{64, 128, 256, 512, 1000});
  CHECK(dyadic_grid(64, 1024) == std::vector<std::uint64_t>{64, 128, 256, 512, 1024});
  CHECK(dyadic_grid(1, 4) == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(dyadic_grid(100, 50).empty());
}

TEST_CASE("last-decile regret") {
  std::vector<double> curve(100);
  for (std::size_t t = 0; t < 100; ++t) curve[t] = 0.3 * static_cast<double>(t + 1);
  CHECK(last_decile_regret(curve) == doctest::Approx(0.3));
}

TEST_CASE("single-learner selection is never suboptimal") {
  auto cfg = small_config("env2", 400, 5);
  cfg.learners = {{"epsgreedy", {}}};
  const auto table = suboptimal_selection_diagnostic(cfg, dyadic_grid(1, 400));
  for (const auto& row : table.rows) {
    CHECK(row.suboptimal_frequency == 0.0);
    if (row.runs > 0) CHECK(row.learner_frequency[0] == 1.0);
  }
}

TEST_CASE("experiment bookkeeping") {
  auto cfg = small_config("env1", 10, 1);
  cfg.learners = {{"linucb", {}}, {"epsgreedy", {}}, {"linucb", {{"alpha", 2}}}};
  const Experiment exp(cfg);
  CHECK(exp.policy_labels() == std::vector<std::string>{"master", "linucb_1", "epsgreedy", "linucb_3"});
  CHECK(exp.optimal_set() == std::vector<std::size_t>{1});
  CHECK(exp.reference_risk(1) == doctest::Approx(-0.65));
  CHECK(exp.master_config().beta == std::vector<double>{0.5, 1.0 / 3.0, 0.5});

  auto env2 = small_config("env2", 10, 1);
  const Experiment e2(env2);
  CHECK(e2.optimal_set() == std::vector<std::size_t>{0});
  CHECK(e2.reference_risk(0) == -e2.optimal_value());
  CHECK(e2.reference_risk(1) > e2.reference_risk(0));

  auto bad = small_config("env1", 0, 1);
  CHECK_THROWS_AS(Experiment{bad}, ConfigError);
}

TEST_CASE("deviation diagnostic on a realizable pair stays above the reference") {
  auto cfg = small_config("env1", 2048, 20);
  cfg.learners = {{"epsgreedy", {}}};
  const auto grid = dyadic_grid(64, 2048);
  const auto table = deviation_diagnostic(cfg, 0, grid, default_deviation_thresholds());
  REQUIRE(table.rows.size() == grid.size());
  for (const auto& row : table.rows) {
    CHECK(row.mean_excess >= -2 * row.std_error);
    CHECK(row.exceed_frequency.size() == 4);
  }
  CHECK(table.rows.back().mean_excess < table.rows.front().mean_excess);
}
