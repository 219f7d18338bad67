#include "ensbfc/policy.hpp"

#include <stdexcept>
#include <vector>

namespace ensbfc {

namespace {

// Small-K scratch buffer without heap traffic in the common case.
class Scratch {
 public:
  explicit Scratch(std::size_t n) : n_(n) {
    if (n_ > kInline) heap_.resize(n_);
  }
  std::span<double> span() noexcept {
    return n_ > kInline ? std::span<double>(heap_) : std::span<double>(inline_, n_);
  }

 private:
  static constexpr std::size_t kInline = 8;
  std::size_t n_;
  double inline_[kInline] = {};
  std::vector<double> heap_;
};

}  // namespace

double Policy::prob(std::size_t action, const Context& x) const {
  check_action(action, ActionCount(action_count()));
  Scratch scratch(action_count());
  auto p = scratch.span();
  distribution(x, p);
  return p[action];
}

std::size_t Policy::sample(const Context& x, Rng& rng) const {
  Scratch scratch(action_count());
  auto p = scratch.span();
  distribution(x, p);
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    cumulative += p[a];
    if (u < cumulative) return a;
  }
  // u landed in the rounding gap above the last cumulative sum.
  for (std::size_t a = p.size(); a-- > 0;) {
    if (p[a] > 0.0) return a;
  }
  return p.size() - 1;
}

void UniformPolicy::distribution(const Context&, std::span<double> out) const {
  for (auto& v : out) v = 1.0 / static_cast<double>(k_);
}

GreedyPolicy::GreedyPolicy(ActionCount k, Scorer scorer, double epsilon)
    : k_(k.value()), scorer_(std::move(scorer)), epsilon_(epsilon) {
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) {
    throw std::domain_error("exploration rate must lie in [0, 1]");
  }
}

std::size_t GreedyPolicy::greedy_action(const Context& x) const {
  Scratch scratch(k_);
  auto scores = scratch.span();
  scorer_(x, scores);
  return argmax_lowest(scores);
}

void GreedyPolicy::distribution(const Context& x, std::span<double> out) const {
  const std::size_t best = greedy_action(x);
  const double spread = epsilon_ / static_cast<double>(k_);
  for (auto& v : out) v = spread;
  out[best] += 1.0 - epsilon_;
}

std::size_t argmax_lowest(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace ensbfc
