#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "slick/hash.hpp"

namespace slick {

// Thrown by SlickConfig::validate(). constraint() names the violated rule,
// e.g. "sliding_block_size <= block_size + 2*max_offset".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string constraint, const std::string& detail)
      : std::invalid_argument("invalid slick config: " + constraint + " (" + detail + ")"),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

struct SlickConfig {
  std::size_t block_size = 10;          // B
  std::size_t sliding_block_size = 20;  // B-hat, upper bound on any block's extent
  std::size_t max_offset = 10;          // o-hat, bound on |boundary displacement|
  std::size_t max_threshold = 10;       // t-hat, priorities range over [0, t-hat)
  std::size_t capacity = 100'000;       // main-table slots
  std::uint64_t seed = 0;

  // B = 10, B-hat = 2B, o-hat = t-hat = B.
  static SlickConfig defaults(std::size_t capacity, std::uint64_t seed = 0) {
    return SlickConfig{10, 20, 10, 10, capacity, seed};
  }

  std::size_t num_blocks() const noexcept { return block_size == 0 ? 0 : capacity / block_size; }

  // Base extent of the last block; the capacity % B tail slots merge into it.
  std::size_t last_block_base_extent() const noexcept {
    return capacity - (num_blocks() - 1) * block_size;
  }

  // Throws ConfigError on the first violated constraint.
  void validate() const;

  // "B_Bhat_ohat_that" with concrete numbers, e.g. "10_20_10_10".
  std::string label() const;

  HashedKey hash(std::uint64_t key) const noexcept {
    return hash_key(key, seed, num_blocks(), max_threshold);
  }

  friend bool operator==(const SlickConfig&, const SlickConfig&) = default;
};

// ceil(log2(n)) for n >= 1; 0 for n == 1.
constexpr std::size_t ceil_log2(std::size_t n) noexcept {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

// Packed width of one block's (offset, threshold) pair.
constexpr std::size_t metadata_bits_per_block(const SlickConfig& c) noexcept {
  return ceil_log2(2 * c.max_offset + 1) + ceil_log2(c.max_threshold + 1);
}

}  // namespace slick
