#include "ensbfc/csv.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ensbfc {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_trace_header(std::ostream& out, std::size_t learner_count, std::size_t dimension) {
  std::vector<std::string> header{"run_id", "policy", "t", "D", "J", "comparison_n",
                                  "action", "reward", "cumulative_reward"};
  for (std::size_t j = 1; j <= learner_count; ++j) header.push_back(fmt::format("n_{}", j));
  for (std::size_t j = 1; j <= learner_count; ++j) header.push_back(fmt::format("nxplr_{}", j));
  for (std::size_t i = 1; i <= dimension; ++i) header.push_back(fmt::format("x_{}", i));
  out << join(header) << '\n';
}

void write_trace_rows(std::ostream& out, std::span<const TraceRow> rows) {
  fmt::memory_buffer buf;
  for (const auto& r : rows) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{}", r.run_id, r.policy, r.t,
                   r.exploration ? 1 : 0, r.selected + 1, r.comparison_n, r.action + 1,
                   format_real(r.reward), format_real(r.cumulative_reward));
    for (auto n : r.internal_times) fmt::format_to(std::back_inserter(buf), ",{}", n);
    for (auto n : r.exploration_counts) fmt::format_to(std::back_inserter(buf), ",{}", n);
    for (auto x : r.context) fmt::format_to(std::back_inserter(buf), ",{}", format_real(x));
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows,
                     std::size_t learner_count) {
  auto out = open_output(path);
  write_trace_header(out, learner_count, rows.empty() ? 0 : rows.front().context.size());
  write_trace_rows(out, rows);
  finish(out, path);
}

void write_aggregate_csv(const std::filesystem::path& path, const ReplicationResult& result) {
  auto out = open_output(path);
  std::vector<std::string> header{"t"};
  for (const auto& p : result.policies) {
    header.push_back(p + "_mean");
    header.push_back(p + "_q10");
    header.push_back(p + "_q90");
  }
  out << join(header) << '\n';
  fmt::memory_buffer buf;
  for (const auto& row : result.rows) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}", row.t);
    for (const auto& s : row.policies) {
      fmt::format_to(std::back_inserter(buf), ",{},{},{}", format_real(s.mean),
                     format_real(s.q10), format_real(s.q90));
    }
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  finish(out, path);
}

void write_deviation_csv(const std::filesystem::path& path,
                         std::span<const DeviationTable> tables) {
  auto out = open_output(path);
  std::vector<std::string> header{"learner", "n", "runs", "reference_risk", "beta",
                                  "mean_excess", "std_error"};
  if (!tables.empty()) {
    for (const auto& th : tables.front().thresholds) {
      header.push_back(fmt::format("exceed_c0_{}_x_{}", th.c0, th.x));
    }
  }
  out << join(header) << '\n';
  for (const auto& table : tables) {
    for (const auto& row : table.rows) {
      out << table.learner << ',' << row.n << ',' << row.runs << ','
          << format_real(table.reference_risk) << ',' << format_real(table.beta) << ','
          << format_real(row.mean_excess) << ',' << format_real(row.std_error);
      for (double f : row.exceed_frequency) out << ',' << format_real(f);
      out << '\n';
    }
  }
  finish(out, path);
}

void write_selection_csv(const std::filesystem::path& path, const SelectionTable& table) {
  auto out = open_output(path);
  std::vector<std::string> header{"n", "runs", "suboptimal_frequency"};
  for (const auto& l : table.learners) header.push_back("freq_" + l);
  out << join(header) << '\n';
  for (const auto& row : table.rows) {
    out << row.n << ',' << row.runs << ',' << format_real(row.suboptimal_frequency);
    for (double f : row.learner_frequency) out << ',' << format_real(f);
    out << '\n';
  }
  finish(out, path);
}

void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows) {
  auto out = open_output(path);
  out << "policy,v_star,slope,intercept,points_used,points_excluded,last_decile_regret,"
         "mean_final_cumulative_reward\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << format_real(r.v_star) << ',' << format_real(r.fit.slope) << ','
        << format_real(r.fit.intercept) << ',' << r.fit.used.size() << ','
        << r.fit.excluded.size() << ',' << format_real(r.last_decile_regret) << ','
        << format_real(r.mean_final_cumulative) << '\n';
  }
  finish(out, path);
}

// ---------------------------------------------------------------------------

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

std::vector<std::string> validate_trace_csv(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  std::vector<std::string> problems;
  std::vector<std::size_t> n_cols, x_cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i].rfind("n_", 0) == 0) n_cols.push_back(i);
    if (table.header[i].rfind("nxplr_", 0) == 0) x_cols.push_back(i);
  }
  if (n_cols.empty() || n_cols.size() != x_cols.size()) {
    return {"trace header lacks matching n_j / nxplr_j columns"};
  }
  const auto c_run = table.column("run_id"), c_policy = table.column("policy"),
             c_t = table.column("t"), c_d = table.column("D"), c_j = table.column("J"),
             c_reward = table.column("reward"), c_cum = table.column("cumulative_reward");

  struct Series {
    std::uint64_t last_t = 0;
    double cumulative = 0.0;
    std::vector<std::uint64_t> n, nxplr;
  };
  std::map<std::pair<std::string, std::string>, Series> series;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = fmt::format("row {}", r + 2);
    if (row.size() != table.header.size()) {
      problems.push_back(where + ": wrong field count");
      continue;
    }
    auto& s = series[{row[c_run], row[c_policy]}];
    if (s.n.empty()) {
      s.n.assign(n_cols.size(), 0);
      s.nxplr.assign(n_cols.size(), 0);
    }
    const auto t = std::stoull(row[c_t]);
    if (t != s.last_t + 1) problems.push_back(where + ": t is not consecutive");
    s.last_t = t;
    s.cumulative += std::stod(row[c_reward]);
    const double cum = std::stod(row[c_cum]);
    if (std::abs(cum - s.cumulative) > 1e-9 * std::max(1.0, std::abs(cum))) {
      problems.push_back(where + ": cumulative reward is not the prefix sum of rewards");
    }
    std::uint64_t total = 0;
    const auto j = std::stoull(row[c_j]);
    const bool explore = row[c_d] == "1";
    for (std::size_t k = 0; k < n_cols.size(); ++k) {
      const auto n = std::stoull(row[n_cols[k]]);
      const auto nx = std::stoull(row[x_cols[k]]);
      total += n;
      if (n < s.n[k] || nx < s.nxplr[k]) problems.push_back(where + ": counter decreased");
      if (nx > n) problems.push_back(where + ": exploration count exceeds internal time");
      const std::uint64_t expect_n = s.n[k] + (k + 1 == j ? 1 : 0);
      const std::uint64_t expect_x = s.nxplr[k] + (k + 1 == j && explore ? 1 : 0);
      if (n != expect_n || nx != expect_x) {
        problems.push_back(where + ": counters disagree with D and J");
      }
      s.n[k] = n;
      s.nxplr[k] = nx;
    }
    if (total != t) problems.push_back(where + ": sum of internal times differs from t");
  }
  return problems;
}

std::vector<std::string> validate_aggregate_csv(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  std::vector<std::string> problems;
  std::vector<std::string> policies;
  for (const auto& h : table.header) {
    if (h.size() > 5 && h.compare(h.size() - 5, 5, "_mean") == 0) {
      policies.push_back(h.substr(0, h.size() - 5));
    }
  }
  if (policies.empty()) return {"aggregate header has no *_mean columns"};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (const auto& p : policies) {
      const double mean = std::stod(row.at(table.column(p + "_mean")));
      const double q10 = std::stod(row.at(table.column(p + "_q10")));
      const double q90 = std::stod(row.at(table.column(p + "_q90")));
      if (!(q10 <= mean && mean <= q90)) {
        problems.push_back(fmt::format("row {}: {} violates q10 <= mean <= q90", r + 2, p));
      }
    }
  }
  return problems;
}

}  // namespace ensbfc
