#pragma once

// Hash pipeline shared by the table and the workload generator.
//
//   h1       = mix64(key ^ seed)
//   home     = (h1 * num_blocks) >> 64            (fastrange)
//   h2       = mix64(h1 + kGolden)
//   priority = h2 % max_threshold
//
// mix64 is the splitmix64 output finalizer. The pipeline is fixed so that
// backyard counts are reproducible across implementations.

#include <cstddef>
#include <cstdint>

namespace slick {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

__extension__ using uint128 = unsigned __int128;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Maps a uniformly distributed word onto [0, range) without division.
constexpr std::uint64_t fastrange64(std::uint64_t word, std::uint64_t range) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(word) * range) >> 64);
}

// Sequential splitmix64 stream. Outputs are distinct for 2^64 draws because
// the state walks a full-period Weyl sequence and mix64 is a bijection.
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

struct HashedKey {
  std::uint32_t home_block = 0;
  std::uint32_t priority = 0;

  friend constexpr bool operator==(const HashedKey&, const HashedKey&) = default;
};

constexpr HashedKey hash_key(std::uint64_t key, std::uint64_t seed, std::size_t num_blocks,
                             std::size_t max_threshold) noexcept {
  const std::uint64_t h1 = mix64(key ^ seed);
  const std::uint64_t h2 = mix64(h1 + kGolden);
  return HashedKey{static_cast<std::uint32_t>(fastrange64(h1, num_blocks)),
                   static_cast<std::uint32_t>(h2 % max_threshold)};
}

}  // namespace slick
