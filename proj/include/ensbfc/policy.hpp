#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ensbfc/random.hpp"
#include "ensbfc/types.hpp"

namespace ensbfc {

// Conditional distribution over K actions given a context.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t action_count() const noexcept = 0;

  // Writes pi(. | x) into `out`, which must hold action_count() entries.
  virtual void distribution(const Context& x, std::span<double> out) const = 0;

  double prob(std::size_t action, const Context& x) const;

  // Inverse-CDF draw. Always consumes exactly one uniform from `rng`, also
  // for point-mass policies, so action streams stay aligned across policies.
  std::size_t sample(const Context& x, Rng& rng) const;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(ActionCount k) : k_(k.value()) {}
  std::size_t action_count() const noexcept override { return k_; }
  void distribution(const Context& x, std::span<double> out) const override;

 private:
  std::size_t k_;
};

// (1 - epsilon) * point mass on argmax of a per-action score, plus epsilon
// spread uniformly. Score ties go to the lowest action index.
class GreedyPolicy final : public Policy {
 public:
  using Scorer = std::function<void(const Context&, std::span<double>)>;

  GreedyPolicy(ActionCount k, Scorer scorer, double epsilon = 0.0);

  std::size_t action_count() const noexcept override { return k_; }
  void distribution(const Context& x, std::span<double> out) const override;

  double epsilon() const noexcept { return epsilon_; }
  std::size_t greedy_action(const Context& x) const;

 private:
  std::size_t k_;
  Scorer scorer_;
  double epsilon_;
};

// Index of the largest entry; the lowest index wins ties.
std::size_t argmax_lowest(std::span<const double> values) noexcept;

}  // namespace ensbfc
