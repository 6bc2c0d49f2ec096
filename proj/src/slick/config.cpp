#include "slick/config.hpp"

#include <limits>

namespace slick {

void SlickConfig::validate() const {
  auto fail = [](const char* constraint, std::string detail) {
    throw ConfigError(constraint, detail);
  };
  if (block_size < 1) fail("block_size >= 1", "block_size = 0");
  if (sliding_block_size < block_size)
    fail("sliding_block_size >= block_size", label());
  if (max_threshold < 1) fail("max_threshold >= 1", "max_threshold = 0");
  if (capacity < block_size)
    fail("capacity >= block_size", "capacity = " + std::to_string(capacity));
  if (sliding_block_size > block_size + 2 * max_offset)
    fail("sliding_block_size <= block_size + 2*max_offset", label());
  if (num_blocks() > std::numeric_limits<std::uint32_t>::max())
    fail("num_blocks < 2^32", "num_blocks = " + std::to_string(num_blocks()));
  if (max_threshold > std::numeric_limits<std::uint32_t>::max())
    fail("max_threshold < 2^32", label());
  if (last_block_base_extent() > sliding_block_size)
    fail("block_size + capacity % block_size <= sliding_block_size",
         "last block base extent = " + std::to_string(last_block_base_extent()));
}

std::string SlickConfig::label() const {
  return std::to_string(block_size) + "_" + std::to_string(sliding_block_size) + "_" +
         std::to_string(max_offset) + "_" + std::to_string(max_threshold);
}

}  // namespace slick
