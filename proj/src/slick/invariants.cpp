#include "slick/invariants.hpp"

#include <cstdlib>
#include <unordered_set>

namespace slick {
namespace {

std::string at(std::size_t block) { return "block " + std::to_string(block) + ": "; }

std::optional<Violation> check_geometry(const SlickTable& t) {
  const SlickConfig& c = t.config();
  const std::size_t m = t.num_blocks();
  if (t.meta(0).offset != 0) return Violation{"GEOMETRY", "offset(0) != 0"};
  std::size_t expected_start = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Extent e = t.block_extent(i);
    if (static_cast<std::size_t>(std::abs(t.meta(i).offset)) > c.max_offset)
      return Violation{"GEOMETRY", at(i) + "|offset| = " +
                                       std::to_string(std::abs(t.meta(i).offset)) +
                                       " exceeds max_offset"};
    if (e.start != expected_start)
      return Violation{"GEOMETRY", at(i) + "extent does not abut its predecessor"};
    // A zero or negative extent means the block was squeezed out by a
    // neighbour that slid across it.
    if (e.end <= e.start)
      return Violation{"GEOMETRY", at(i) + "empty or inverted extent [" +
                                       std::to_string(e.start) + ", " +
                                       std::to_string(e.end) + ")"};
    if (e.size() > c.sliding_block_size)
      return Violation{"GEOMETRY", at(i) + "extent " + std::to_string(e.size()) +
                                       " exceeds sliding_block_size"};
    if (t.fill(i) > e.size())
      return Violation{"GEOMETRY", at(i) + "fill exceeds extent"};
    expected_start = e.end;
  }
  if (expected_start != c.capacity)
    return Violation{"GEOMETRY", "extents do not cover the capacity"};
  return std::nullopt;
}

std::optional<Violation> check_membership(const SlickTable& t) {
  for (std::size_t i = 0; i < t.num_blocks(); ++i) {
    for (Key k : t.block_keys(i)) {
      const HashedKey h = t.hashed(k);
      if (h.home_block != i)
        return Violation{"MEMBERSHIP", at(i) + "holds key " + std::to_string(k) +
                                           " of home " + std::to_string(h.home_block)};
      if (h.priority < t.meta(i).threshold)
        return Violation{"MEMBERSHIP", at(i) + "key " + std::to_string(k) +
                                           " below the block threshold"};
    }
  }
  std::size_t indexed = 0;
  for (const auto& [k, v] : t.backyard()) {
    const HashedKey h = t.hashed(k);
    if (h.priority >= t.meta(h.home_block).threshold)
      return Violation{"MEMBERSHIP", "backyard key " + std::to_string(k) +
                                         " is at or above its home threshold"};
    bool listed = false;
    for (Key other : t.backyard_keys_of(h.home_block)) listed = listed || other == k;
    if (!listed)
      return Violation{"MEMBERSHIP",
                       "backyard key " + std::to_string(k) + " missing from the block index"};
  }
  for (std::size_t i = 0; i < t.num_blocks(); ++i) indexed += t.backyard_keys_of(i).size();
  if (indexed != t.backyard().size())
    return Violation{"MEMBERSHIP", "block index lists " + std::to_string(indexed) +
                                       " keys, backyard holds " +
                                       std::to_string(t.backyard().size())};
  return std::nullopt;
}

std::optional<Violation> check_conservation(const SlickTable& t) {
  std::size_t filled = 0;
  std::unordered_set<Key> seen;
  seen.reserve(t.size());
  for (std::size_t i = 0; i < t.num_blocks(); ++i) {
    filled += t.fill(i);
    for (Key k : t.block_keys(i)) {
      if (!seen.insert(k).second)
        return Violation{"CONSERVATION", "key " + std::to_string(k) + " stored twice"};
    }
  }
  if (filled != t.main_size())
    return Violation{"CONSERVATION", "sum of fills != main length"};
  for (const auto& [k, v] : t.backyard()) {
    if (!seen.insert(k).second)
      return Violation{"CONSERVATION", "key " + std::to_string(k) + " in both stores"};
  }
  if (t.size() != filled + t.backyard().size())
    return Violation{"CONSERVATION", "total length != sum of fills + backyard length"};
  return std::nullopt;
}

}  // namespace

std::optional<Violation> check_invariants(const SlickTable& table) {
  if (auto v = check_geometry(table)) return v;
  if (auto v = check_membership(table)) return v;
  return check_conservation(table);
}

}  // namespace slick
