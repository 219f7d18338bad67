#include "ensbfc/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ensbfc {

Context::Context(std::vector<double> values) : values_(std::move(values)) {
  if (!std::all_of(values_.begin(), values_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw std::domain_error("context components must be finite");
  }
}

Context::Context(std::initializer_list<double> values)
    : Context(std::vector<double>(values)) {}

ActionCount::ActionCount(std::size_t k) : k_(k) {
  if (k < 2) {
    throw std::domain_error("action count must be at least 2, got " +
                            std::to_string(k));
  }
}

void check_action(std::size_t action, ActionCount k) {
  if (action >= k.value()) {
    throw std::domain_error("action " + std::to_string(action + 1) +
                            " outside [1, " + std::to_string(k.value()) + "]");
  }
}

}  // namespace ensbfc
