#include "slick/bench/harness.hpp"

#include <atomic>
#include <chrono>

namespace slick::bench {
namespace {

std::atomic<std::uint64_t> g_timer_reads{0};

template <class Backend>
void run_phases(Backend& backend, const BenchPlan& plan, std::span<const Key> keys,
                std::size_t repetition, std::vector<BenchRecord>& out) {
  auto wants = [&](Phase p) {
    return std::find(plan.phases.begin(), plan.phases.end(), p) != plan.phases.end();
  };
  if (wants(Phase::Insert)) {
    out.push_back(run_phase(backend, Phase::Insert, keys, plan.seed, repetition));
  } else {
    for (std::size_t i = 0; i < keys.size(); ++i) backend.insert(keys[i], i);
  }
  if (wants(Phase::Query))
    out.push_back(run_phase(backend, Phase::Query, keys, plan.seed, repetition));
  if (wants(Phase::Delete))
    out.push_back(run_phase(backend, Phase::Delete, keys, plan.seed, repetition));
}

}  // namespace

namespace detail {
std::uint64_t now_ns() noexcept {
#ifdef SLICK_INSTRUMENTED
  g_timer_reads.fetch_add(1, std::memory_order_relaxed);
#endif
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                        std::chrono::steady_clock::now().time_since_epoch())
                                        .count());
}
}  // namespace detail

std::uint64_t timer_reads() noexcept { return g_timer_reads.load(std::memory_order_relaxed); }

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Insert: return "insert";
    case Phase::Query: return "query";
    case Phase::Delete: return "delete";
  }
  return "?";
}

std::string_view to_string(Baseline baseline) noexcept {
  switch (baseline) {
    case Baseline::UnorderedMap: return "unordered_map";
    case Baseline::OrderedMap: return "ordered_map";
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view name) noexcept {
  for (Phase p : {Phase::Insert, Phase::Query, Phase::Delete})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

std::optional<Baseline> parse_baseline(std::string_view name) noexcept {
  for (Baseline b : {Baseline::UnorderedMap, Baseline::OrderedMap})
    if (to_string(b) == name) return b;
  return std::nullopt;
}

std::vector<std::uint64_t> gen_keys(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> keys(n);
  SplitMix64 rng(seed);
  for (auto& k : keys) k = rng();
  return keys;
}

void BenchPlan::validate() const {
  if (repetitions < 1) throw BenchError("repetitions must be >= 1");
  if (n_ops < 1) throw BenchError("ops must be >= 1");
  if (phases.empty()) throw BenchError("no phases selected");
  if (n_ops > capacity)
    throw BenchError("ops (" + std::to_string(n_ops) + ") exceeds capacity (" +
                     std::to_string(capacity) + ")");
}

std::vector<SlickConfig> grid_configs(std::size_t capacity, std::uint64_t seed) {
  std::vector<SlickConfig> grid;
  for (std::size_t b : {5, 10, 50, 200}) grid.push_back({b, 2 * b, b, b, capacity, seed});
  const std::size_t b = 10;
  grid.push_back({b, 4 * b, 2 * b, b, capacity, seed});
  grid.push_back({b, b * b, b * b / 2, b, capacity, seed});
  grid.push_back({b, 2 * b, b, 4 * b, capacity, seed});
  grid.push_back({b, 2 * b, b, b * b, capacity, seed});
  return grid;
}

GridResult run_plan(const BenchPlan& plan) {
  plan.validate();
  GridResult result;
  const std::vector<Key> keys = gen_keys(plan.n_ops, plan.seed);

  for (const SlickConfig& config : plan.configs) {
    try {
      config.validate();
    } catch (const ConfigError& e) {
      result.failures.push_back({config.label(), e.what()});
      continue;
    }
    for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
      SlickBackend backend(config, plan.cleaning);
      run_phases(backend, plan, keys, rep, result.records);
    }
  }

  for (Baseline baseline : plan.baselines) {
    for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
      if (baseline == Baseline::UnorderedMap) {
        UnorderedMapBackend backend(plan.capacity);
        run_phases(backend, plan, keys, rep, result.records);
      } else {
        OrderedMapBackend backend(plan.capacity);
        run_phases(backend, plan, keys, rep, result.records);
      }
    }
  }
  return result;
}

GridResult run_grid(const BenchPlan& plan) {
  BenchPlan grid = plan;
  grid.configs = grid_configs(plan.capacity, plan.seed);
  return run_plan(grid);
}

}  // namespace slick::bench
