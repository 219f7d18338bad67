#include "ensbfc/cli.hpp"

#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ensbfc/config.hpp"
#include "ensbfc/csv.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

namespace {

struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::string> name;
  std::optional<std::string> env;
  std::optional<std::uint64_t> horizon;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<std::string> out;
  std::optional<std::string> learners;
  std::optional<std::size_t> threads;
  std::optional<std::string> trace;
  bool contexts = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--config", o.config, "key = value experiment file");
  cmd.add_option("--name", o.name, "file-name stem of the outputs");
  cmd.add_option("--env", o.env, "environment id (env1, env2)");
  cmd.add_option("--horizon", o.horizon, "rounds per run (T)");
  cmd.add_option("--runs", o.runs, "replications (R)");
  cmd.add_option("--seed", o.seed, "base seed");
  cmd.add_option("--c1", o.c1, "selector penalty constant");
  cmd.add_option("--c2", o.c2, "exploration constant");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--learners", o.learners, "comma-separated learner ids, in order");
  cmd.add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd.add_option("--trace", o.trace, "full or aggregate")
      ->check(CLI::IsMember({"full", "aggregate"}));
  cmd.add_flag("--contexts", o.contexts, "add x_1..x_d columns to traces");
}

ExperimentConfig build_config(const CommonOptions& o, ExperimentConfig base) {
  ExperimentConfig cfg = o.config ? load_config(*o.config, std::move(base)) : std::move(base);
  if (o.name) cfg.name = *o.name;
  if (o.env) {
    cfg.environment = EnvironmentSpec{};
    cfg.environment.kind = *o.env;
  }
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.runs) cfg.runs = *o.runs;
  if (o.seed) cfg.seed = *o.seed;
  if (o.c1) cfg.master.c1 = *o.c1;
  if (o.c2) cfg.master.c2 = *o.c2;
  if (o.out) cfg.output_dir = *o.out;
  if (o.learners) {
    cfg.learners = parse_learner_list(*o.learners);
    cfg.master.beta.clear();
  }
  if (o.threads) cfg.threads = *o.threads;
  if (o.trace) {
    cfg.granularity =
        *o.trace == "full" ? TraceGranularity::kFull : TraceGranularity::kAggregateOnly;
  }
  if (o.contexts) cfg.include_contexts = true;
  cfg.validate();
  return cfg;
}

std::filesystem::path output_file(const ExperimentConfig& cfg, const std::string& kind) {
  return cfg.output_dir / (cfg.name + "_" + kind + ".csv");
}

int command_run(const ExperimentConfig& cfg, std::uint64_t run_id, std::ostream& out) {
  const Experiment exp(cfg);
  const auto rows = run_one(cfg, run_id);
  const auto path = output_file(cfg, "trace");
  write_trace_csv(path, rows, exp.learner_count());
  const auto labels = exp.policy_labels();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const auto& last = rows.at((p + 1) * cfg.horizon - 1);
    out << fmt::format("{}: cumulative reward {:.6f} after {} rounds\n", labels[p],
                       last.cumulative_reward, cfg.horizon);
  }
  out << "wrote " << path.string() << '\n';
  return 0;
}

int command_replicate(const ExperimentConfig& cfg, std::ostream& out) {
  const Experiment exp(cfg);
  const auto result = replicate(cfg);
  const auto agg = output_file(cfg, "agg");
  write_aggregate_csv(agg, result);

  const double v_star = exp.optimal_value();
  std::vector<RateRow> rates;
  for (std::size_t p = 0; p < result.policies.size(); ++p) {
    const auto curve = result.mean_regret_curve(p, v_star);
    RateRow row;
    row.policy = result.policies[p];
    row.v_star = v_star;
    try {
      row.fit = fit_rate_exponent(curve);
    } catch (const std::exception&) {
      row.fit.slope = std::numeric_limits<double>::quiet_NaN();
      row.fit.intercept = std::numeric_limits<double>::quiet_NaN();
    }
    row.last_decile_regret = last_decile_regret(curve);
    row.mean_final_cumulative = result.mean_final_cumulative(p);
    rates.push_back(row);
    out << fmt::format("{}: mean cumulative reward {:.4f}, regret slope {:.4f}\n", row.policy,
                       row.mean_final_cumulative, row.fit.slope);
  }
  const auto rates_path = output_file(cfg, "diag_rates");
  write_rates_csv(rates_path, rates);
  out << "wrote " << agg.string() << '\n' << "wrote " << rates_path.string() << '\n';

  if (cfg.granularity == TraceGranularity::kFull) {
    const auto path = output_file(cfg, "trace");
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream trace(path, std::ios::binary | std::ios::trunc);
    if (!trace) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_trace_header(trace, exp.learner_count(),
                       cfg.include_contexts ? exp.environment().dimension() : 0);
    for (std::size_t r = 0; r < cfg.runs; ++r) write_trace_rows(trace, run_one(cfg, r));
    trace.flush();
    if (!trace) throw std::runtime_error("write to '" + path.string() + "' failed");
    out << "wrote " << path.string() << '\n';
  }
  return 0;
}

int command_diagnose(const ExperimentConfig& cfg, std::ostream& out) {
  const Experiment exp(cfg);
  const auto grid = dyadic_grid(64, cfg.horizon);
  std::vector<DeviationTable> tables;
  for (std::size_t j = 0; j < exp.learner_count(); ++j) {
    tables.push_back(deviation_diagnostic(cfg, j, grid, default_deviation_thresholds()));
    std::vector<double> excess;
    for (const auto& row : tables.back().rows) excess.push_back(row.mean_excess);
    const auto fit = fit_power_law(grid, excess);
    out << fmt::format("{}: R*={:.6f} beta={:.4f} excess slope {:.4f}\n", tables.back().learner,
                       tables.back().reference_risk, tables.back().beta, fit.slope);
  }
  const auto dev = output_file(cfg, "diag_deviation");
  write_deviation_csv(dev, tables);

  const auto selection = suboptimal_selection_diagnostic(cfg, dyadic_grid(1, cfg.horizon));
  const auto sel = output_file(cfg, "diag_selection");
  write_selection_csv(sel, selection);
  for (const auto& row : selection.rows) {
    if (row.runs == 0) continue;
    out << fmt::format("n={}: P[suboptimal]={:.4f} over {} runs\n", row.n,
                       row.suboptimal_frequency, row.runs);
  }
  out << "wrote " << dev.string() << '\n' << "wrote " << sel.string() << '\n';
  return 0;
}

int command_value(const ExperimentConfig& cfg, std::ostream& out) {
  const Experiment exp(cfg);
  const auto v = exp.environment().optimal_value();
  out << fmt::format("environment {}\n", exp.environment().id());
  out << fmt::format("optimal_value {:.10f} ({}", v.value, v.method);
  if (v.samples > 0) {
    out << fmt::format(", {} samples, seed {:#x}, std_error {:.2e}", v.samples, v.seed,
                       v.std_error);
  }
  out << ")\n";
  const auto q = quadrant_class_value(exp.environment());
  out << fmt::format("quadrant_class_value {:.10f} ({})\n", q.value, q.method);
  for (std::size_t j = 0; j < exp.learner_count(); ++j) {
    out << fmt::format("reference_risk {} {:.10f}\n", exp.learner_label(j), exp.reference_risk(j));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model selection over contextual bandit learners"};
  app.require_subcommand(1);

  CommonOptions run_opts, rep_opts, diag_opts, value_opts;
  std::uint64_t run_id = 0;
  auto* run = app.add_subcommand("run", "one run of the master and each learner, full trace");
  add_common(*run, run_opts);
  run->add_option("--run-id", run_id, "replication index used to derive the streams");
  auto* rep = app.add_subcommand("replicate", "R runs, aggregate quantiles and rate fits");
  add_common(*rep, rep_opts);
  auto* diag = app.add_subcommand("diagnose", "deviation and selection diagnostics");
  add_common(*diag, diag_opts);
  auto* value = app.add_subcommand("value", "print environment oracle values");
  add_common(*value, value_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return command_run(build_config(run_opts, {}), run_id, out);
    if (rep->parsed()) {
      ExperimentConfig base;
      base.granularity = TraceGranularity::kAggregateOnly;
      return command_replicate(build_config(rep_opts, base), out);
    }
    if (diag->parsed()) return command_diagnose(build_config(diag_opts, {}), out);
    return command_value(build_config(value_opts, {}), out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ensbfc
