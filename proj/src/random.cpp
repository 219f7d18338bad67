#include "ensbfc/random.hpp"

namespace ensbfc {

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_id,
                          StreamTag tag) noexcept {
  std::uint64_t h = SplitMix64::mix(base_seed + SplitMix64::kGamma);
  h = SplitMix64::mix(h ^ (run_id + 0x632BE59BD9B4E019ULL));
  return SplitMix64::mix(h ^ (static_cast<std::uint64_t>(tag) * SplitMix64::kGamma));
}

std::uint64_t derive_seed(std::uint64_t stream_seed,
                          std::uint64_t counter) noexcept {
  return SplitMix64::mix(stream_seed ^ SplitMix64::mix(counter + SplitMix64::kGamma));
}

double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) noexcept {
  auto index = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return index < n ? index : n - 1;
}

RunStreams RunStreams::for_run(std::uint64_t base_seed, std::uint64_t run_id) {
  return RunStreams{
      Rng(derive_seed(base_seed, run_id, StreamTag::kMaster)),
      Rng(derive_seed(base_seed, run_id, StreamTag::kAction)),
      derive_seed(base_seed, run_id, StreamTag::kEnvironment),
  };
}

}  // namespace ensbfc
