#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "ensbfc/harness.hpp"

namespace ensbfc {

// Reads an experiment description:
//
//   name = fig1_env2
//   horizon = 10000
//   runs = 100
//   seed = 1
//   out = results
//   threads = 0
//   trace = full            ; or aggregate
//   contexts = false
//
//   [master]
//   c1 = 0.5
//   c2 = 10
//   exploration_only_risk = false
//
//   [env]
//   id = linear_gaussian    ; env1, env2, piecewise_bernoulli, linear_gaussian
//   arm1 = 0.9, 0.5, 0.3, -0.9, -0.2
//   arm2 = 0.9, -0.5, 0.1, -0.7, 0.6
//   noise_sd = 1
//   optimal = linucb
//
//   [learner.1]
//   id = linucb
//   alpha = 1
//
// Text after ';' or '#' is a comment. Learner sections are ordered by N.
// Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

}  // namespace ensbfc
