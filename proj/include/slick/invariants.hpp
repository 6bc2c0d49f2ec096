#pragma once

#include <optional>
#include <string>

#include "slick/table.hpp"

namespace slick {

struct Violation {
  std::string invariant;  // "GEOMETRY", "MEMBERSHIP" or "CONSERVATION"
  std::string detail;
};

// Full re-scan of the table. Returns the first violated invariant, checked in
// the order GEOMETRY, MEMBERSHIP, CONSERVATION.
//
//   GEOMETRY      offset(0) = 0, |offset(i)| <= max_offset, extents tile
//                 [0, capacity), 1 <= extent(i) <= sliding_block_size and
//                 fill(i) <= extent(i).
//   MEMBERSHIP    main keys sit in their home block with priority >= its
//                 threshold; backyard keys have priority < their home's
//                 threshold and are listed in the per-block index.
//   CONSERVATION  size() = sum of fills + backyard size, no duplicate keys.
std::optional<Violation> check_invariants(const SlickTable& table);

}  // namespace slick
