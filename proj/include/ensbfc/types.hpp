#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace ensbfc {

// Raised for malformed experiment configuration (config file or CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covariate vector observed before each decision. Components are finite.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<double> values);
  Context(std::initializer_list<double> values);

  std::size_t dimension() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<double> values_;
};

// Number of actions K of a bandit problem (K >= 2).
class ActionCount {
 public:
  explicit ActionCount(std::size_t k);
  std::size_t value() const noexcept { return k_; }
  friend bool operator==(ActionCount, ActionCount) = default;

 private:
  std::size_t k_;
};

// One (context, action, reward) triple. Actions are 0-based in code and
// written 1-based in every file and on the command line.
struct Observation {
  Context context;
  std::size_t action = 0;
  double reward = 0.0;
};

void check_action(std::size_t action, ActionCount k);

}  // namespace ensbfc
