#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ensbfc/harness.hpp"

namespace ensbfc {

// Shortest-exact-enough text form: 17 significant digits, round-trips doubles.
std::string format_real(double value);

// Trace columns:
//   run_id,policy,t,D,J,comparison_n,action,reward,cumulative_reward,
//   n_1..n_J,nxplr_1..nxplr_J[,x_1..x_d]
// with J (selected learner) and action 1-based.
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows,
                     std::size_t learner_count);
// Streaming form for traces too large to hold at once.
void write_trace_header(std::ostream& out, std::size_t learner_count, std::size_t dimension);
void write_trace_rows(std::ostream& out, std::span<const TraceRow> rows);

// Aggregate columns: t, then {policy}_mean,{policy}_q10,{policy}_q90 per policy.
void write_aggregate_csv(const std::filesystem::path& path, const ReplicationResult& result);

// learner,n,runs,reference_risk,beta,mean_excess,std_error,exceed_c0_{C}_x_{X}...
void write_deviation_csv(const std::filesystem::path& path,
                         std::span<const DeviationTable> tables);

// n,runs,suboptimal_frequency,freq_{learner}...
void write_selection_csv(const std::filesystem::path& path, const SelectionTable& table);

struct RateRow {
  std::string policy;
  double v_star = 0.0;
  RateFit fit;
  double last_decile_regret = 0.0;
  double mean_final_cumulative = 0.0;
};

// policy,v_star,slope,intercept,points_used,points_excluded,last_decile_regret,
// mean_final_cumulative_reward
void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws std::out_of_range naming the column.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Row-wise invariant checks on emitted files; returns human-readable
// violations (empty when the file is consistent).
std::vector<std::string> validate_trace_csv(const std::filesystem::path& path);
std::vector<std::string> validate_aggregate_csv(const std::filesystem::path& path);

}  // namespace ensbfc
