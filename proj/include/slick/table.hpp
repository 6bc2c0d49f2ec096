#pragma once

// Sliding-block hash table.
//
// The main table is an array of `capacity` slots cut into m = capacity / B
// blocks. Block i nominally owns [i*B, (i+1)*B); its start boundary may be
// displaced by a signed offset bounded by max_offset, so a full block can
// borrow slots from a neighbour by sliding the boundaries between them. The
// entries of a block always occupy a contiguous prefix of its extent.
//
// Every key carries a pseudo-random priority in [0, max_threshold). Each block
// keeps a threshold; keys whose priority is below their home block's
// threshold live in the backyard, an unbounded side map. When a block is full
// and no slide is possible, its threshold is raised just far enough to free a
// slot (or to divert the incoming key), and the affected entries are bumped.
//
// Lookups compare the key's priority with one threshold and then search
// exactly one store, so a query touches a single block or the backyard.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "slick/config.hpp"
#include "slick/hash.hpp"

namespace slick {

using Key = std::uint64_t;
using Value = std::uint64_t;

// All per-block metadata.
struct BlockMeta {
  std::int32_t offset = 0;     // displacement of the start boundary from i*B
  std::uint32_t threshold = 0;  // keys with priority < threshold are bumped

  friend bool operator==(const BlockMeta&, const BlockMeta&) = default;
};

// Half-open slot range [start, end).
struct Extent {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const Extent&, const Extent&) = default;
};

enum class Direction { Left, Right };

struct InsertOutcome {
  enum class Kind : std::uint8_t { PlacedMain, PlacedBackyard, ReplacedExisting };
  enum class Reason : std::uint8_t { None, BelowThreshold, ThresholdRaised };

  Kind kind = Kind::PlacedMain;
  Reason reason = Reason::None;  // set for PlacedBackyard only
  std::size_t block = 0;         // home block
  std::size_t slot = 0;          // set for PlacedMain only

  static InsertOutcome main(std::size_t block, std::size_t slot) {
    return {Kind::PlacedMain, Reason::None, block, slot};
  }
  static InsertOutcome backyard(std::size_t block, Reason why) {
    return {Kind::PlacedBackyard, why, block, 0};
  }
  static InsertOutcome replaced(std::size_t block) {
    return {Kind::ReplacedExisting, Reason::None, block, 0};
  }

  friend bool operator==(const InsertOutcome&, const InsertOutcome&) = default;
};

struct BumpReport {
  std::uint32_t old_threshold = 0;
  std::uint32_t new_threshold = 0;
  std::size_t evicted = 0;       // resident entries moved to the backyard
  bool incoming_bumped = false;  // the key being inserted must go to the backyard too
};

struct CleaningPolicy {
  enum class Kind : std::uint8_t { None, NaiveFull, Targeted };

  Kind kind = Kind::None;
  // Targeted only. When empty, delete_entry targets the deleted key's home
  // block; clean_backyard requires it.
  std::optional<std::size_t> block;

  static CleaningPolicy none() { return {}; }
  static CleaningPolicy naive_full() { return {Kind::NaiveFull, std::nullopt}; }
  static CleaningPolicy targeted(std::optional<std::size_t> block = std::nullopt) {
    return {Kind::Targeted, block};
  }
};

struct CleanReport {
  std::size_t moved = 0;  // backyard entries that ended up in the main table
};

struct TableStats {
  std::size_t main_len = 0;
  std::size_t backyard_len = 0;
  std::size_t capacity = 0;
  std::size_t num_blocks = 0;
  std::size_t metadata_bits_nominal = 0;
  double backyard_fraction = 0.0;  // backyard_len / (main_len + backyard_len)
  std::size_t max_abs_offset_seen = 0;
  std::size_t max_threshold_seen = 0;
  std::uint64_t bump_events = 0;

  friend bool operator==(const TableStats&, const TableStats&) = default;
};

// Lookup counters; only advanced in builds compiled with SLICK_INSTRUMENTED.
struct ProbeCounters {
  std::uint64_t main_probes = 0;
  std::uint64_t backyard_probes = 0;
};

namespace detail {
struct TableAccess;
}

class SlickTable {
 public:
  // Throws ConfigError if the config is invalid.
  explicit SlickTable(const SlickConfig& config);

  // Inserts or replaces. Never fails: the backyard absorbs whatever the main
  // table cannot hold.
  InsertOutcome try_insert(Key key, Value value);

  std::optional<Value> get(Key key) const;
  bool contains(Key key) const { return get(key).has_value(); }

  // Removes key if present and then runs the cleaning policy. Boundaries are
  // never moved by deletion.
  bool delete_entry(Key key, CleaningPolicy policy = CleaningPolicy::none());

  // Throws std::invalid_argument for a Targeted policy without a valid block.
  CleanReport clean_backyard(const CleaningPolicy& policy);

  TableStats stats() const;

  const SlickConfig& config() const noexcept { return config_; }
  std::size_t num_blocks() const noexcept { return metas_.size(); }
  std::size_t size() const noexcept { return main_len_ + backyard_.size(); }
  std::size_t main_size() const noexcept { return main_len_; }
  std::size_t backyard_size() const noexcept { return backyard_.size(); }
  std::uint64_t bump_events() const noexcept { return bump_events_; }

  HashedKey hashed(Key key) const noexcept {
    return hash_key(key, config_.seed, metas_.size(), config_.max_threshold);
  }

  Extent block_extent(std::size_t block) const noexcept {
    return {block_start(block), block_end(block)};
  }
  const BlockMeta& meta(std::size_t block) const noexcept { return metas_[block]; }
  std::size_t fill(std::size_t block) const noexcept { return fill_[block]; }

  // Occupied prefix of a block.
  std::span<const Key> block_keys(std::size_t block) const noexcept {
    return {keys_.data() + block_start(block), fill_[block]};
  }
  std::span<const Value> block_values(std::size_t block) const noexcept {
    return {values_.data() + block_start(block), fill_[block]};
  }

  const std::unordered_map<Key, Value>& backyard() const noexcept { return backyard_; }
  // Backyard keys whose home is `block`.
  std::span<const Key> backyard_keys_of(std::size_t block) const;

  ProbeCounters probe_counters() const noexcept { return probes_; }

 private:
  friend struct detail::TableAccess;

  std::size_t block_start(std::size_t block) const noexcept {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(block * config_.block_size) +
                                    metas_[block].offset);
  }
  std::size_t block_end(std::size_t block) const noexcept {
    return block + 1 == metas_.size() ? config_.capacity : block_start(block + 1);
  }
  std::size_t extent_size(std::size_t block) const noexcept {
    return block_end(block) - block_start(block);
  }

  // Nearest block in `dir` that can donate a free slot to the full block,
  // searching at most `max_distance` blocks away.
  std::optional<std::size_t> find_donor(std::size_t block, Direction dir,
                                        std::size_t max_distance) const noexcept;
  // Shifts every boundary between block and donor one slot toward block.
  void shift_from(std::size_t block, std::size_t donor) noexcept;
  bool slide_toward(std::size_t block, Direction dir);
  // Frees room in a full block by raising its threshold. The incoming key's
  // priority takes part in picking the new threshold but is not placed here.
  BumpReport raise_threshold_and_bump(std::size_t block, std::uint32_t incoming_priority);

  std::size_t append_to_block(std::size_t block, Key key, Value value) noexcept;
  void remove_from_block(std::size_t block, std::size_t slot) noexcept;
  void backyard_put(std::uint32_t home, Key key, Value value);
  void backyard_erase(std::uint32_t home, Key key);
  void note_offset(std::int32_t offset) noexcept;
  void set_threshold(std::size_t block, std::uint32_t threshold) noexcept;

  std::size_t clean_naive_full();
  std::size_t clean_targeted(std::size_t block);

  SlickConfig config_;
  std::vector<Key> keys_;
  std::vector<Value> values_;
  std::vector<BlockMeta> metas_;
  std::vector<std::uint32_t> fill_;
  std::unordered_map<Key, Value> backyard_;
  std::unordered_map<std::uint32_t, std::vector<Key>> backyard_index_;
  std::size_t main_len_ = 0;
  std::uint64_t bump_events_ = 0;
  std::size_t max_abs_offset_seen_ = 0;
  std::size_t max_threshold_seen_ = 0;
  bool over_arc_guard_ = true;
  mutable ProbeCounters probes_;
};

}  // namespace slick
