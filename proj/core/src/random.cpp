#include "matchmix/random.hpp"

namespace matchmix {

Rng derive_stream(std::uint64_t master_seed, std::uint64_t replica) {
  // The raw words go in unchanged so that different (seed, replica) pairs
  // always give different seed sequences; the mixed words spread bits.
  const std::uint64_t mix = splitmix64(master_seed ^ splitmix64(replica));
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32),
                    static_cast<std::uint32_t>(mix), static_cast<std::uint32_t>(mix >> 32)};
  return Rng(seq);
}

}  // namespace matchmix
