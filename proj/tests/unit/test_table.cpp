#include <algorithm>
#include <unordered_map>

#include "doctest.h"
#include "model_compare.hpp"
#include "slick/invariants.hpp"
#include "table_access.hpp"

using namespace slick;
using namespace slick::testing;

namespace {

std::vector<Key> keys_where(std::size_t n, std::uint64_t stream,
                            const std::function<bool(Key)>& pred) {
  return find_keys(n, stream, pred);
}

}  // namespace

TEST_CASE("insert into an empty table lands at the start of the home block") {
  SlickTable t(SlickConfig::defaults(1000));
  const Key k = 0xABCDEF;
  const std::size_t b = t.hashed(k).home_block;
  const InsertOutcome out = t.try_insert(k, 5);
  CHECK(out == InsertOutcome::main(b, t.block_extent(b).start));
  CHECK(t.get(k) == 5);
  CHECK(t.size() == 1);
}

TEST_CASE("keys below the block threshold go straight to the backyard") {
  const SlickConfig c = SlickConfig::defaults(1000);
  SlickTable t(c);
  const Key k = find_key(1, [&](Key x) { return c.hash(x).priority == 3; });
  const std::size_t b = c.hash(k).home_block;
  Access::set_threshold(t, b, 5);
  const InsertOutcome out = t.try_insert(k, 9);
  CHECK(out.kind == InsertOutcome::Kind::PlacedBackyard);
  CHECK(out.reason == InsertOutcome::Reason::BelowThreshold);
  CHECK(t.fill(b) == 0);
  CHECK(t.main_size() == 0);
  CHECK(t.backyard_size() == 1);
  CHECK(t.get(k) == 9);
  CHECK_FALSE(check_invariants(t).has_value());
}

TEST_CASE("re-inserting a key replaces its value in either store") {
  const SlickConfig c = SlickConfig::defaults(1000);
  SlickTable t(c);
  const Key main_key = 17;
  CHECK(t.try_insert(main_key, 1).kind == InsertOutcome::Kind::PlacedMain);
  CHECK(t.try_insert(main_key, 2).kind == InsertOutcome::Kind::ReplacedExisting);
  CHECK(t.get(main_key) == 2);

  const Key by_key = find_key(2, [&](Key x) { return c.hash(x).priority == 0; });
  Access::set_threshold(t, c.hash(by_key).home_block, 1);
  CHECK(t.try_insert(by_key, 1).kind == InsertOutcome::Kind::PlacedBackyard);
  CHECK(t.try_insert(by_key, 3).kind == InsertOutcome::Kind::ReplacedExisting);
  CHECK(t.get(by_key) == 3);
  CHECK(t.size() == 2);
}

TEST_CASE("raising the threshold evicts the lowest priority level") {
  // B-hat = B and no offset: a full block can only bump.
  const SlickConfig c{4, 4, 0, 10, 40, 0};
  SlickTable t(c);
  auto with = [&](std::uint32_t p, std::uint64_t stream) {
    return find_key(stream, [&](Key k) {
      return c.hash(k).home_block == 0 && c.hash(k).priority == p;
    });
  };
  const std::vector<Key> residents{with(0, 1), with(0, 2), with(1, 3), with(7, 4)};
  for (Key k : residents) REQUIRE(t.try_insert(k, k).kind == InsertOutcome::Kind::PlacedMain);

  SUBCASE("via try_insert") {
    const Key incoming = with(5, 5);
    const InsertOutcome out = t.try_insert(incoming, 1);
    CHECK(out.kind == InsertOutcome::Kind::PlacedMain);
    CHECK(t.meta(0).threshold == 1);
    CHECK(t.backyard_size() == 2);
    CHECK(t.backyard().count(residents[0]) == 1);
    CHECK(t.backyard().count(residents[1]) == 1);
    CHECK(t.fill(0) == 3);
    CHECK(t.bump_events() == 2);
    for (Key k : residents) CHECK(t.get(k) == k);
    CHECK_FALSE(check_invariants(t).has_value());
  }
  SUBCASE("direct") {
    const BumpReport r = Access::raise_threshold_and_bump(t, 0, 5);
    CHECK(r.old_threshold == 0);
    CHECK(r.new_threshold == 1);
    CHECK(r.evicted == 2);
    CHECK_FALSE(r.incoming_bumped);
  }
}

TEST_CASE("an incoming key at or below every resident priority is bumped itself") {
  const SlickConfig c{4, 4, 0, 10, 40, 0};
  SlickTable t(c);
  const auto residents = keys_where(4, 1, [&](Key k) {
    return c.hash(k).home_block == 2 && c.hash(k).priority >= 4;
  });
  for (Key k : residents) t.try_insert(k, k);
  const std::uint32_t lowest = std::min({c.hash(residents[0]).priority,
                                         c.hash(residents[1]).priority,
                                         c.hash(residents[2]).priority,
                                         c.hash(residents[3]).priority});
  const Key incoming = find_key(9, [&](Key k) {
    return c.hash(k).home_block == 2 && c.hash(k).priority == 3;
  });
  const InsertOutcome out = t.try_insert(incoming, 1);
  CHECK(out.kind == InsertOutcome::Kind::PlacedBackyard);
  CHECK(out.reason == InsertOutcome::Reason::ThresholdRaised);
  CHECK(t.meta(2).threshold == 4);
  CHECK(t.fill(2) == 4);
  CHECK(lowest >= 4);
  CHECK(t.bump_events() >= 1);
  CHECK(t.get(incoming) == 1);
  CHECK_FALSE(check_invariants(t).has_value());
}

TEST_CASE("with a single priority level a full block is emptied") {
  const SlickConfig c{3, 3, 0, 1, 9, 0};
  SlickTable t(c);
  const auto keys = keys_where(4, 1, [&](Key k) { return c.hash(k).home_block == 1; });
  for (std::size_t i = 0; i < 3; ++i) t.try_insert(keys[i], i);
  const InsertOutcome out = t.try_insert(keys[3], 3);
  CHECK(out.reason == InsertOutcome::Reason::ThresholdRaised);
  CHECK(t.meta(1).threshold == 1);
  CHECK(t.fill(1) == 0);
  CHECK(t.backyard_size() == 4);
  CHECK(t.bump_events() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(t.get(keys[i]) == i);
}

TEST_CASE("ThresholdRaised outcomes always record a bump event") {
  const SlickConfig c{2, 4, 2, 4, 64, 3};
  SlickTable t(c);
  SplitMix64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t before = t.bump_events();
    const InsertOutcome out = t.try_insert(rng(), i);
    if (out.reason == InsertOutcome::Reason::ThresholdRaised) CHECK(t.bump_events() > before);
  }
}

TEST_CASE("mini instance: five keys for one block match the brute-force model") {
  const SlickConfig c{2, 4, 2, 4, 8, 0};
  const auto home0 = keys_where(5, 1, [&](Key k) { return c.hash(k).home_block == 0; });
  const auto others = keys_where(3, 2, [&](Key k) { return c.hash(k).home_block != 0; });
  std::vector<Key> order{home0[0], others[0], home0[1], home0[2], others[1],
                         home0[3], home0[4], others[2]};

  SlickTable t(c);
  ReferenceSlick ref(c);
  std::size_t home0_seen = 0;
  for (Key k : order) {
    t.try_insert(k, k + 1);
    ref.insert(k, k + 1);
    INFO("after key " << k);
    REQUIRE(diff_against_model(t, ref) == "");
    REQUIRE_FALSE(check_invariants(t).has_value());
    if (c.hash(k).home_block == 0 && ++home0_seen == 5) {
      const bool grew = t.block_extent(0).size() > c.block_size;
      const bool bumped = t.meta(0).threshold > 0 && t.backyard_size() > 0;
      CHECK((grew || bumped));
    }
  }
  for (Key k : order) CHECK(t.get(k) == k + 1);
}

TEST_CASE("get reads the store picked by the threshold and nothing else") {
  const SlickConfig c{2, 4, 2, 4, 64, 1};
  SlickTable t(c);
  SplitMix64 rng(3);
  std::vector<Key> keys;
  for (int i = 0; i < 100; ++i) {
    keys.push_back(rng());
    t.try_insert(keys.back(), i);
  }
  REQUIRE(t.backyard_size() > 0);
  for (Key k : keys) {
    const ProbeCounters before = t.probe_counters();
    const bool in_backyard = t.backyard().count(k) == 1;
    REQUIRE(t.get(k).has_value());
    const ProbeCounters after = t.probe_counters();
    if (in_backyard) {
      CHECK(after.main_probes == before.main_probes);
      CHECK(after.backyard_probes == before.backyard_probes + 1);
    } else {
      CHECK(after.main_probes == before.main_probes + 1);
      CHECK(after.backyard_probes == before.backyard_probes);
    }
  }
}

TEST_CASE("an evicted key stays reachable through the backyard") {
  const SlickConfig c{2, 2, 0, 4, 8, 0};
  SlickTable t(c);
  ReferenceSlick ref(c);
  const auto keys = keys_where(6, 4, [&](Key k) { return c.hash(k).home_block == 1; });
  for (Key k : keys) {
    t.try_insert(k, ~k);
    ref.insert(k, ~k);
  }
  REQUIRE(t.backyard_size() > 0);
  REQUIRE(diff_against_model(t, ref) == "");
  for (Key k : keys) {
    CHECK(t.get(k) == ~k);
    CHECK(t.get(k) == ref.get(k));
  }
}

TEST_CASE("contains is get mapped to presence") {
  SlickTable t(SlickConfig{5, 10, 5, 5, 2000, 0});
  SplitMix64 rng(12);
  std::vector<Key> inserted;
  for (int i = 0; i < 2000; ++i) {
    inserted.push_back(rng());
    t.try_insert(inserted.back(), i);
  }
  SplitMix64 probe(12);
  SplitMix64 absent(999);
  for (int i = 0; i < 5000; ++i) {
    for (Key k : {probe(), absent()}) CHECK(t.contains(k) == t.get(k).has_value());
  }
  CHECK(t.contains(inserted.front()));
  CHECK_FALSE(t.contains(0xFFFF'FFFF'FFFF'FFFFULL));
}

TEST_CASE("delete from main and from the backyard") {
  const SlickConfig c{2, 2, 0, 4, 8, 0};
  SlickTable t(c);
  SplitMix64 rng(5);
  std::vector<Key> keys;
  for (int i = 0; i < 12; ++i) {
    keys.push_back(rng());
    t.try_insert(keys.back(), i);
  }
  REQUIRE(t.backyard_size() > 0);
  std::size_t size = t.size();
  for (Key k : keys) {
    CHECK(t.delete_entry(k));
    CHECK_FALSE(t.get(k).has_value());
    CHECK(t.size() == --size);
    REQUIRE_FALSE(check_invariants(t).has_value());
  }
  CHECK(t.main_size() == 0);
  CHECK(t.backyard_size() == 0);
}

TEST_CASE("deleting an absent key changes nothing") {
  SlickTable t(SlickConfig::defaults(100));
  t.try_insert(1, 1);
  const TableStats before = t.stats();
  CHECK_FALSE(t.delete_entry(2, CleaningPolicy::naive_full()));
  CHECK_FALSE(t.delete_entry(2, CleaningPolicy::targeted()));
  CHECK(t.stats() == before);
}

TEST_CASE("deleting the middle entry keeps the block contiguous") {
  const SlickConfig c{4, 8, 4, 4, 16, 0};
  SlickTable t(c);
  const auto keys = keys_where(3, 1, [&](Key k) { return c.hash(k).home_block == 1; });
  for (Key k : keys) t.try_insert(k, k);
  const std::size_t start = t.block_extent(1).start;
  REQUIRE(Access::slot_key(t, start + 1) == keys[1]);
  CHECK(t.delete_entry(keys[1]));
  CHECK(t.fill(1) == 2);
  const auto remaining = t.block_keys(1);
  CHECK(std::set<Key>(remaining.begin(), remaining.end()) == std::set<Key>{keys[0], keys[2]});
  CHECK(Access::slot_key(t, start) == keys[0]);
  CHECK(Access::slot_key(t, start + 1) == keys[2]);
  CHECK_FALSE(check_invariants(t).has_value());
}

TEST_CASE("deletion never moves boundaries or lowers thresholds by itself") {
  const SlickConfig c{2, 4, 2, 4, 16, 0};
  SlickTable t(c);
  SplitMix64 rng(21);
  std::vector<Key> keys;
  for (int i = 0; i < 24; ++i) {
    keys.push_back(rng());
    t.try_insert(keys.back(), i);
  }
  std::vector<BlockMeta> metas;
  for (std::size_t i = 0; i < t.num_blocks(); ++i) metas.push_back(t.meta(i));
  for (Key k : keys) t.delete_entry(k, CleaningPolicy::none());
  for (std::size_t i = 0; i < t.num_blocks(); ++i) CHECK(t.meta(i) == metas[i]);
}

TEST_CASE("stats track offsets and thresholds") {
  SlickTable t(SlickConfig::defaults(10'000, 4));
  SplitMix64 rng(4);
  for (int i = 0; i < 10'000; ++i) t.try_insert(rng(), i);
  const TableStats s = t.stats();
  CHECK(s.main_len + s.backyard_len == 10'000);
  CHECK(s.backyard_fraction == doctest::Approx(double(s.backyard_len) / 10'000));
  CHECK(s.max_abs_offset_seen <= 10);
  CHECK(s.max_abs_offset_seen > 0);
  CHECK(s.max_threshold_seen <= 10);
  CHECK(s.max_threshold_seen > 0);
  // Each raise diverts at least one key; no deletes happened.
  CHECK(s.bump_events > 0);
  CHECK(s.bump_events <= s.backyard_len);
  CHECK(s.metadata_bits_nominal == 1000 * 9);
}
