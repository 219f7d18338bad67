#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace ensbfc {

// Counter-based generator: the state advances by a fixed odd increment and
// every output is a bijective mix of the counter. Models
// UniformRandomBitGenerator, so <random> distributions accept it.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix(state_ += kGamma); }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

enum class StreamTag : std::uint64_t {
  kMaster = 1,       // exploration indicator and uniform learner draws
  kAction = 2,       // action sampling from proposed policies
  kEnvironment = 3,  // contexts and rewards, re-derived every round
  kDiagnostic = 4,   // Monte-Carlo oracles
};

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_id,
                          StreamTag tag) noexcept;

// Sub-stream `counter` of a stream seed (e.g. the environment draw of round t).
std::uint64_t derive_seed(std::uint64_t stream_seed,
                          std::uint64_t counter) noexcept;

// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng) noexcept;

// Uniform on {0, ..., n-1}; n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n) noexcept;

// The three independent streams of one simulated run. The environment stream
// is re-derived every round: all policies simulated under one run id see the
// same context sequence, whatever their rewards consumed.
struct RunStreams {
  Rng master;
  Rng action;
  std::uint64_t environment_seed = 0;

  static RunStreams for_run(std::uint64_t base_seed, std::uint64_t run_id);

  Rng environment_round(std::uint64_t t) const {
    return Rng(derive_seed(environment_seed, t));
  }
};

}  // namespace ensbfc
