#include "slick/table.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#ifdef SLICK_INSTRUMENTED
#define SLICK_PROBE(counter) (++probes_.counter)
#else
#define SLICK_PROBE(counter) ((void)0)
#endif

namespace slick {

SlickTable::SlickTable(const SlickConfig& config) : config_(config) {
  config_.validate();
  keys_.assign(config_.capacity, Key{0});
  values_.assign(config_.capacity, Value{0});
  metas_.assign(config_.num_blocks(), BlockMeta{});
  fill_.assign(config_.num_blocks(), 0);
}

std::span<const Key> SlickTable::backyard_keys_of(std::size_t block) const {
  auto it = backyard_index_.find(static_cast<std::uint32_t>(block));
  if (it == backyard_index_.end()) return {};
  return it->second;
}

std::optional<Value> SlickTable::get(Key key) const {
  const HashedKey h = hashed(key);
  if (h.priority < metas_[h.home_block].threshold) {
    SLICK_PROBE(backyard_probes);
    auto it = backyard_.find(key);
    if (it == backyard_.end()) return std::nullopt;
    return it->second;
  }
  SLICK_PROBE(main_probes);
  const std::size_t start = block_start(h.home_block);
  const std::size_t stop = start + fill_[h.home_block];
  for (std::size_t s = start; s < stop; ++s) {
    if (keys_[s] == key) return values_[s];
  }
  return std::nullopt;
}

InsertOutcome SlickTable::try_insert(Key key, Value value) {
  const HashedKey h = hashed(key);
  const std::size_t b = h.home_block;

  if (h.priority < metas_[b].threshold) {
    auto [it, inserted] = backyard_.try_emplace(key, value);
    if (!inserted) {
      it->second = value;
      return InsertOutcome::replaced(b);
    }
    backyard_index_[h.home_block].push_back(key);
    return InsertOutcome::backyard(b, InsertOutcome::Reason::BelowThreshold);
  }

  const std::size_t start = block_start(b);
  for (std::size_t s = start; s < start + fill_[b]; ++s) {
    if (keys_[s] == key) {
      values_[s] = value;
      return InsertOutcome::replaced(b);
    }
  }

  if (fill_[b] < extent_size(b)) return InsertOutcome::main(b, append_to_block(b, key, value));

  // Nearest donor wins; a tie goes right.
  const auto right = find_donor(b, Direction::Right, std::numeric_limits<std::size_t>::max());
  const std::size_t right_distance =
      right ? *right - b : std::numeric_limits<std::size_t>::max();
  const auto left = find_donor(b, Direction::Left, right_distance - 1);
  if (left || right) {
    shift_from(b, left ? *left : *right);
    return InsertOutcome::main(b, append_to_block(b, key, value));
  }

  const BumpReport bump = raise_threshold_and_bump(b, h.priority);
  if (bump.incoming_bumped) {
    backyard_put(h.home_block, key, value);
    ++bump_events_;
    return InsertOutcome::backyard(b, InsertOutcome::Reason::ThresholdRaised);
  }
  return InsertOutcome::main(b, append_to_block(b, key, value));
}

std::optional<std::size_t> SlickTable::find_donor(std::size_t block, Direction dir,
                                                  std::size_t max_distance) const noexcept {
  if (extent_size(block) + 1 > config_.sliding_block_size) return std::nullopt;
  const auto max_offset = static_cast<std::int32_t>(config_.max_offset);
  const std::size_t m = metas_.size();

  auto is_donor = [&](std::size_t j) {
    const std::size_t extent = extent_size(j);
    if (fill_[j] >= extent) return false;
    // A donor that is empty with a single slot would be squeezed to nothing
    // and swallowed by its growing neighbour.
    if (over_arc_guard_ && fill_[j] == 0 && extent == 1) return false;
    return true;
  };

  if (dir == Direction::Right) {
    // Boundaries block+1 ..= donor move right. The end of the last block is
    // pinned at capacity and never moves, so only start boundaries are checked.
    for (std::size_t j = block + 1, d = 1; j < m && d <= max_distance; ++j, ++d) {
      if (metas_[j].offset + 1 > max_offset) return std::nullopt;
      if (is_donor(j)) return j;
    }
  } else {
    // Boundaries donor+1 ..= block move left. Boundary 0 never moves.
    for (std::size_t j = block, d = 1; j > 0 && d <= max_distance; ++d) {
      if (metas_[j].offset - 1 < -max_offset) return std::nullopt;
      --j;
      if (is_donor(j)) return j;
    }
  }
  return std::nullopt;
}

void SlickTable::shift_from(std::size_t block, std::size_t donor) noexcept {
  if (donor > block) {
    // Each block in (block, donor] gives up its first slot: its leading entry
    // moves to the slot just past its occupied prefix, freed by the block to
    // its right (or unused, for the donor).
    for (std::size_t k = donor; k > block; --k) {
      const std::size_t start = block_start(k);
      if (fill_[k] > 0) {
        keys_[start + fill_[k]] = keys_[start];
        values_[start + fill_[k]] = values_[start];
      }
      ++metas_[k].offset;
      note_offset(metas_[k].offset);
    }
  } else {
    // Each block in (donor, block] takes the slot before its start: its last
    // entry moves there, freeing the slot at the end of its prefix.
    for (std::size_t k = donor + 1; k <= block; ++k) {
      const std::size_t start = block_start(k);
      if (fill_[k] > 0) {
        keys_[start - 1] = keys_[start + fill_[k] - 1];
        values_[start - 1] = values_[start + fill_[k] - 1];
      }
      --metas_[k].offset;
      note_offset(metas_[k].offset);
    }
  }
}

bool SlickTable::slide_toward(std::size_t block, Direction dir) {
  if (fill_[block] < extent_size(block)) return false;
  const auto donor = find_donor(block, dir, std::numeric_limits<std::size_t>::max());
  if (!donor) return false;
  shift_from(block, *donor);
  return true;
}

BumpReport SlickTable::raise_threshold_and_bump(std::size_t block,
                                                std::uint32_t incoming_priority) {
  BumpReport report;
  report.old_threshold = metas_[block].threshold;

  // Smallest threshold that evicts at least one resident or exceeds the
  // incoming priority. Residents all have priority >= the old threshold.
  std::uint32_t lowest = incoming_priority;
  for (Key k : block_keys(block)) lowest = std::min(lowest, hashed(k).priority);
  const std::uint32_t raised = lowest + 1;
  set_threshold(block, raised);
  report.new_threshold = raised;
  report.incoming_bumped = incoming_priority < raised;

  const std::size_t start = block_start(block);
  for (std::size_t i = 0; i < fill_[block];) {
    const Key k = keys_[start + i];
    const HashedKey h = hashed(k);
    if (h.priority < raised) {
      backyard_put(h.home_block, k, values_[start + i]);
      remove_from_block(block, start + i);
      ++report.evicted;
    } else {
      ++i;
    }
  }
  bump_events_ += report.evicted;
  return report;
}

bool SlickTable::delete_entry(Key key, CleaningPolicy policy) {
  const HashedKey h = hashed(key);
  const std::size_t b = h.home_block;

  if (h.priority < metas_[b].threshold) {
    if (backyard_.erase(key) == 0) return false;
    backyard_erase(h.home_block, key);
  } else {
    const std::size_t start = block_start(b);
    std::size_t s = start;
    const std::size_t stop = start + fill_[b];
    while (s < stop && keys_[s] != key) ++s;
    if (s == stop) return false;
    remove_from_block(b, s);
  }

  if (policy.kind == CleaningPolicy::Kind::Targeted && !policy.block) policy.block = b;
  clean_backyard(policy);
  return true;
}

CleanReport SlickTable::clean_backyard(const CleaningPolicy& policy) {
  switch (policy.kind) {
    case CleaningPolicy::Kind::None:
      return {};
    case CleaningPolicy::Kind::NaiveFull:
      return {clean_naive_full()};
    case CleaningPolicy::Kind::Targeted:
      if (!policy.block || *policy.block >= metas_.size())
        throw std::invalid_argument("targeted cleaning needs a block index below " +
                                    std::to_string(metas_.size()));
      return {clean_targeted(*policy.block)};
  }
  return {};
}

std::size_t SlickTable::clean_naive_full() {
  if (backyard_.empty()) return 0;
  const std::size_t free_slots = config_.capacity - main_len_;
  if (free_slots < backyard_.size()) return 0;

  std::vector<std::pair<Key, Value>> pending(backyard_.begin(), backyard_.end());
  std::sort(pending.begin(), pending.end());
  backyard_.clear();
  backyard_index_.clear();
  for (const auto& [k, v] : pending) set_threshold(hashed(k).home_block, 0);
  // Sorted so the outcome does not depend on hash-map iteration order.
  for (const auto& [k, v] : pending) try_insert(k, v);

  std::size_t moved = 0;
  for (const auto& [k, v] : pending) {
    const HashedKey h = hashed(k);
    if (h.priority >= metas_[h.home_block].threshold) ++moved;
  }
  return moved;
}

std::size_t SlickTable::clean_targeted(std::size_t block) {
  std::size_t moved = 0;
  std::vector<Key> candidates;
  while (metas_[block].threshold > 0) {
    const std::size_t free_slots = extent_size(block) - fill_[block];
    if (free_slots == 0) break;
    const std::uint32_t level = metas_[block].threshold - 1;
    candidates.clear();
    for (Key k : backyard_keys_of(block)) {
      if (hashed(k).priority == level) candidates.push_back(k);
    }
    if (candidates.empty() || candidates.size() > free_slots) break;
    for (Key k : candidates) {
      auto it = backyard_.find(k);
      append_to_block(block, k, it->second);
      backyard_.erase(it);
      backyard_erase(static_cast<std::uint32_t>(block), k);
    }
    metas_[block].threshold = level;
    moved += candidates.size();
  }
  return moved;
}

TableStats SlickTable::stats() const {
  TableStats s;
  s.main_len = main_len_;
  s.backyard_len = backyard_.size();
  s.capacity = config_.capacity;
  s.num_blocks = metas_.size();
  s.metadata_bits_nominal = metas_.size() * metadata_bits_per_block(config_);
  const std::size_t total = s.main_len + s.backyard_len;
  s.backyard_fraction = total == 0 ? 0.0 : static_cast<double>(s.backyard_len) / total;
  s.max_abs_offset_seen = max_abs_offset_seen_;
  s.max_threshold_seen = max_threshold_seen_;
  s.bump_events = bump_events_;
  return s;
}

std::size_t SlickTable::append_to_block(std::size_t block, Key key, Value value) noexcept {
  const std::size_t slot = block_start(block) + fill_[block];
  keys_[slot] = key;
  values_[slot] = value;
  ++fill_[block];
  ++main_len_;
  return slot;
}

void SlickTable::remove_from_block(std::size_t block, std::size_t slot) noexcept {
  const std::size_t last = block_start(block) + fill_[block] - 1;
  keys_[slot] = keys_[last];
  values_[slot] = values_[last];
  keys_[last] = 0;
  values_[last] = 0;
  --fill_[block];
  --main_len_;
}

void SlickTable::backyard_put(std::uint32_t home, Key key, Value value) {
  backyard_.emplace(key, value);
  backyard_index_[home].push_back(key);
}

void SlickTable::backyard_erase(std::uint32_t home, Key key) {
  auto it = backyard_index_.find(home);
  if (it == backyard_index_.end()) return;
  auto& keys = it->second;
  auto pos = std::find(keys.begin(), keys.end(), key);
  if (pos == keys.end()) return;
  *pos = keys.back();
  keys.pop_back();
  if (keys.empty()) backyard_index_.erase(it);
}

void SlickTable::note_offset(std::int32_t offset) noexcept {
  max_abs_offset_seen_ = std::max<std::size_t>(max_abs_offset_seen_, std::abs(offset));
}

void SlickTable::set_threshold(std::size_t block, std::uint32_t threshold) noexcept {
  metas_[block].threshold = threshold;
  max_threshold_seen_ = std::max<std::size_t>(max_threshold_seen_, threshold);
}

}  // namespace slick
