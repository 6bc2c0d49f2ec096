#pragma once

// Workload harness: times insert, query and delete phases for slick tables and
// the two standard-library baselines.
//
// Timers are read only outside the timed loops. The delete phase runs in
// batches of kDeleteBatch keys and sums the per-batch times.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slick/config.hpp"
#include "slick/table.hpp"

namespace slick::bench {

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Phase { Insert, Query, Delete };
enum class Baseline { UnorderedMap, OrderedMap };

inline constexpr std::size_t kDeleteBatch = 10'000;

std::string_view to_string(Phase phase) noexcept;
std::string_view to_string(Baseline baseline) noexcept;
std::optional<Phase> parse_phase(std::string_view name) noexcept;
std::optional<Baseline> parse_baseline(std::string_view name) noexcept;

// n distinct keys from a splitmix64 stream seeded with `seed`.
std::vector<std::uint64_t> gen_keys(std::size_t n, std::uint64_t seed);

struct BenchPlan {
  std::size_t capacity = 100'000;
  std::size_t n_ops = 100'000;
  std::vector<Phase> phases{Phase::Insert, Phase::Query, Phase::Delete};
  std::vector<SlickConfig> configs;
  std::vector<Baseline> baselines{Baseline::UnorderedMap, Baseline::OrderedMap};
  std::uint64_t seed = 0;
  std::size_t repetitions = 3;
  CleaningPolicy::Kind cleaning = CleaningPolicy::Kind::Targeted;

  static BenchPlan desk() { return {}; }
  static BenchPlan paper_scale() {
    BenchPlan plan;
    plan.capacity = 2'000'000;
    plan.n_ops = 2'000'000;
    return plan;
  }

  // Throws BenchError. Slick configs are validated separately per label.
  void validate() const;
};

struct BenchRecord {
  std::string impl;    // "slick", "unordered_map" or "ordered_map"
  std::string config;  // "B_Bhat_ohat_that" for slick, empty for baselines
  Phase phase = Phase::Insert;
  std::size_t ops = 0;
  std::uint64_t total_ns = 0;
  std::optional<std::size_t> backyard_len;   // slick only
  std::optional<std::size_t> metadata_bits;  // slick only
  std::uint64_t seed = 0;
  std::size_t repetition = 0;

  double ns_per_op() const noexcept {
    return ops == 0 ? 0.0 : static_cast<double>(total_ns) / static_cast<double>(ops);
  }

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct ConfigFailure {
  std::string label;
  std::string message;
};

struct GridResult {
  std::vector<BenchRecord> records;
  std::vector<ConfigFailure> failures;
};

// The eight hyperparameter configurations of the sweep: B in {5,10,50,200}
// with defaults elsewhere, (B-hat, o-hat) in {(4B,2B), (B^2,B^2/2)} at B = 10,
// and t-hat in {4B, B^2} at B = 10.
std::vector<SlickConfig> grid_configs(std::size_t capacity, std::uint64_t seed);

// Runs plan.configs and plan.baselines. An invalid config is reported in
// failures and skipped; the rest still run.
GridResult run_plan(const BenchPlan& plan);

// run_plan over grid_configs(plan.capacity, plan.seed), ignoring plan.configs.
GridResult run_grid(const BenchPlan& plan);

// --- backends -------------------------------------------------------------

class SlickBackend {
 public:
  SlickBackend(const SlickConfig& config, CleaningPolicy::Kind cleaning)
      : table_(config), cleaning_{cleaning, std::nullopt} {}

  static constexpr std::string_view name() { return "slick"; }
  std::string label() const { return table_.config().label(); }

  void insert(Key key, Value value) { table_.try_insert(key, value); }
  bool find(Key key) const { return table_.contains(key); }
  bool erase(Key key) { return table_.delete_entry(key, cleaning_); }
  std::size_t size() const { return table_.size(); }

  const SlickTable& table() const { return table_; }

 private:
  SlickTable table_;
  CleaningPolicy cleaning_;
};

class UnorderedMapBackend {
 public:
  explicit UnorderedMapBackend(std::size_t capacity) { map_.reserve(capacity); }

  static constexpr std::string_view name() { return "unordered_map"; }
  std::string label() const { return {}; }

  void insert(Key key, Value value) { map_.insert_or_assign(key, value); }
  bool find(Key key) const { return map_.find(key) != map_.end(); }
  bool erase(Key key) { return map_.erase(key) != 0; }
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<Key, Value> map_;
};

class OrderedMapBackend {
 public:
  explicit OrderedMapBackend(std::size_t /*capacity*/) {}

  static constexpr std::string_view name() { return "ordered_map"; }
  std::string label() const { return {}; }

  void insert(Key key, Value value) { map_.insert_or_assign(key, value); }
  bool find(Key key) const { return map_.find(key) != map_.end(); }
  bool erase(Key key) { return map_.erase(key) != 0; }
  std::size_t size() const { return map_.size(); }

 private:
  std::map<Key, Value> map_;
};

namespace detail {
// Monotonic clock in nanoseconds.
std::uint64_t now_ns() noexcept;
}  // namespace detail

// Number of clock reads so far; only counted in instrumented builds.
std::uint64_t timer_reads() noexcept;

// Times one phase on an existing backend. Query and delete expect `keys` to
// have been inserted already; a phase whose post-condition fails (a missed
// lookup, a key that could not be deleted) throws BenchError.
template <class Backend>
BenchRecord run_phase(Backend& backend, Phase phase, std::span<const Key> keys,
                      std::uint64_t seed, std::size_t repetition) {
  BenchRecord rec;
  rec.impl = std::string(Backend::name());
  rec.config = backend.label();
  rec.phase = phase;
  rec.ops = keys.size();
  rec.seed = seed;
  rec.repetition = repetition;

  switch (phase) {
    case Phase::Insert: {
      const std::uint64_t t0 = detail::now_ns();
      for (std::size_t i = 0; i < keys.size(); ++i) backend.insert(keys[i], i);
      rec.total_ns = detail::now_ns() - t0;
      if (backend.size() != keys.size())
        throw BenchError(rec.impl + " insert: size " + std::to_string(backend.size()) +
                         " after " + std::to_string(keys.size()) + " inserts");
      break;
    }
    case Phase::Query: {
      if (backend.size() < keys.size())
        throw BenchError(rec.impl + " query: phase requires the keys to be inserted first");
      std::size_t hits = 0;
      const std::uint64_t t0 = detail::now_ns();
      for (Key k : keys) hits += backend.find(k) ? 1 : 0;
      rec.total_ns = detail::now_ns() - t0;
      if (hits != keys.size())
        throw BenchError(rec.impl + " query: " + std::to_string(keys.size() - hits) +
                         " lookups missed");
      break;
    }
    case Phase::Delete: {
      if (backend.size() < keys.size())
        throw BenchError(rec.impl + " delete: phase requires the keys to be inserted first");
      std::size_t removed = 0;
      for (std::size_t begin = 0; begin < keys.size(); begin += kDeleteBatch) {
        const std::size_t end = std::min(keys.size(), begin + kDeleteBatch);
        const std::uint64_t t0 = detail::now_ns();
        for (std::size_t i = begin; i < end; ++i) removed += backend.erase(keys[i]) ? 1 : 0;
        rec.total_ns += detail::now_ns() - t0;
      }
      if (removed != keys.size())
        throw BenchError(rec.impl + " delete: removed " + std::to_string(removed) + " of " +
                         std::to_string(keys.size()));
      break;
    }
  }

  if constexpr (requires { backend.table(); }) {
    const TableStats s = backend.table().stats();
    rec.backyard_len = s.backyard_len;
    rec.metadata_bits = s.metadata_bits_nominal;
  }
  return rec;
}

}  // namespace slick::bench
