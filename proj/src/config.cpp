#include "ensbfc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ensbfc/types.hpp"

namespace ensbfc {

namespace {

using boost::property_tree::ptree;

template <class T>
T parse_number(const std::string& key, std::string text) {
  boost::algorithm::trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

bool parse_bool(const std::string& key, std::string text) {
  boost::algorithm::trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    boost::algorithm::trim(item);
    out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_reals(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text)) out.push_back(parse_number<double>(key, item));
  return out;
}

void read_top(const ptree& node, const std::string& key, ExperimentConfig& cfg) {
  const auto value = node.data();
  if (key == "name") {
    cfg.name = boost::algorithm::trim_copy(value);
  } else if (key == "horizon") {
    cfg.horizon = parse_number<std::uint64_t>(key, value);
  } else if (key == "runs") {
    cfg.runs = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.output_dir = boost::algorithm::trim_copy(value);
  } else if (key == "threads") {
    cfg.threads = parse_number<std::size_t>(key, value);
  } else if (key == "contexts") {
    cfg.include_contexts = parse_bool(key, value);
  } else if (key == "trace") {
    const auto v = boost::algorithm::trim_copy(value);
    if (v == "full") {
      cfg.granularity = TraceGranularity::kFull;
    } else if (v == "aggregate") {
      cfg.granularity = TraceGranularity::kAggregateOnly;
    } else {
      throw ConfigError("'trace' must be full or aggregate");
    }
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void read_master(const ptree& section, MasterConfig& m) {
  for (const auto& [key, node] : section) {
    const auto& v = node.data();
    if (key == "c1") {
      m.c1 = parse_number<double>("master." + key, v);
    } else if (key == "c2") {
      m.c2 = parse_number<double>("master." + key, v);
    } else if (key == "exploration_only_risk") {
      m.exploration_only_risk = parse_bool("master." + key, v);
    } else if (key == "beta") {
      m.beta = parse_reals("master.beta", v);
    } else {
      throw ConfigError("unknown key 'master." + key + "'");
    }
  }
}

void read_env(const ptree& section, EnvironmentSpec& env) {
  std::map<std::size_t, std::vector<double>> arms;
  for (const auto& [key, node] : section) {
    const auto& v = node.data();
    if (key == "id" || key == "kind") {
      env.kind = boost::algorithm::trim_copy(v);
    } else if (key == "dimension") {
      env.dimension = parse_number<std::size_t>("env." + key, v);
    } else if (key == "noise_sd") {
      env.noise_sd = parse_number<double>("env." + key, v);
    } else if (key == "optimal") {
      env.optimal_learners = split(v);
    } else if (key.rfind("arm", 0) == 0 && key.size() > 3) {
      const auto index = parse_number<std::size_t>("env." + key, key.substr(3));
      if (index == 0) throw ConfigError("arms are numbered from 1");
      arms[index] = parse_reals("env." + key, v);
    } else {
      throw ConfigError("unknown key 'env." + key + "'");
    }
  }
  if (!arms.empty()) {
    if (arms.rbegin()->first != arms.size()) {
      throw ConfigError("arm numbering must be contiguous from arm1");
    }
    env.arms.clear();
    for (auto& [index, coeffs] : arms) env.arms.push_back(std::move(coeffs));
  }
}

LearnerSpec read_learner(const std::string& name, const ptree& section) {
  LearnerSpec spec;
  for (const auto& [key, node] : section) {
    if (key == "id") {
      spec.id = boost::algorithm::trim_copy(node.data());
    } else {
      spec.params[key] = parse_number<double>(name + "." + key, node.data());
    }
  }
  if (spec.id.empty()) throw ConfigError("[" + name + "] lacks an id");
  return spec;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg) {
  std::stringstream cleaned;
  std::string line;
  while (std::getline(in, line)) cleaned << line.substr(0, line.find_first_of(";#")) << '\n';

  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  std::map<std::size_t, LearnerSpec> learners;
  for (const auto& [key, node] : tree) {
    if (key == "master") {
      read_master(node, cfg.master);
    } else if (key == "env") {
      read_env(node, cfg.environment);
    } else if (key.rfind("learner.", 0) == 0) {
      const auto index = parse_number<std::size_t>(key, key.substr(8));
      learners[index] = read_learner(key, node);
    } else if (node.empty()) {
      read_top(node, key, cfg);
    } else {
      throw ConfigError("unknown section [" + key + "]");
    }
  }
  if (!learners.empty()) {
    cfg.learners.clear();
    for (auto& [index, spec] : learners) cfg.learners.push_back(std::move(spec));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_config(in, std::move(base));
}

}  // namespace ensbfc
