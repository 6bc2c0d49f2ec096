#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "slick/bench/csv.hpp"
#include "slick/bench/harness.hpp"
#include "slick/config.hpp"
#include "slick/hash.hpp"
#include "slick/invariants.hpp"
#include "slick/table.hpp"

namespace py = pybind11;
using namespace slick;

namespace {

CleaningPolicy::Kind parse_cleaning(const std::string& name) {
  if (name == "none") return CleaningPolicy::Kind::None;
  if (name == "naive") return CleaningPolicy::Kind::NaiveFull;
  if (name == "targeted") return CleaningPolicy::Kind::Targeted;
  throw py::value_error("cleaning must be 'none', 'naive' or 'targeted', got '" + name + "'");
}

std::vector<bench::Phase> parse_phases(const std::vector<std::string>& names) {
  std::vector<bench::Phase> out;
  for (const auto& n : names) {
    const auto p = bench::parse_phase(n);
    if (!p) throw py::value_error("unknown phase '" + n + "'");
    out.push_back(*p);
  }
  return out;
}

std::vector<bench::Baseline> parse_baselines(const std::vector<std::string>& names) {
  std::vector<bench::Baseline> out;
  for (const auto& n : names) {
    const auto b = bench::parse_baseline(n);
    if (!b) throw py::value_error("unknown baseline '" + n + "'");
    out.push_back(*b);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sliding-block hash table and workload harness.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<bench::BenchError>(m, "BenchError", PyExc_RuntimeError);

  m.def("mix64", &mix64, py::arg("x"));
  m.def(
      "hash_key",
      [](std::uint64_t key, std::uint64_t seed, std::uint64_t num_blocks,
         std::uint64_t max_threshold) {
        const HashedKey h = hash_key(key, seed, num_blocks, max_threshold);
        return py::make_tuple(h.home_block, h.priority);
      },
      py::arg("key"), py::arg("seed"), py::arg("num_blocks"), py::arg("max_threshold"),
      "Returns (home_block, priority).");
  m.def("gen_keys", &bench::gen_keys, py::arg("n"), py::arg("seed") = 0);

  py::class_<SlickConfig>(m, "SlickConfig")
      .def(py::init([](std::size_t block_size, std::size_t sliding_block_size,
                       std::size_t max_offset, std::size_t max_threshold,
                       std::size_t capacity, std::uint64_t seed) {
             return SlickConfig{block_size, sliding_block_size, max_offset, max_threshold,
                                capacity, seed};
           }),
           py::arg("block_size") = 10, py::arg("sliding_block_size") = 20,
           py::arg("max_offset") = 10, py::arg("max_threshold") = 10,
           py::arg("capacity") = 100'000, py::arg("seed") = 0)
      .def_static("defaults", &SlickConfig::defaults, py::arg("capacity"), py::arg("seed") = 0)
      .def_readwrite("block_size", &SlickConfig::block_size)
      .def_readwrite("sliding_block_size", &SlickConfig::sliding_block_size)
      .def_readwrite("max_offset", &SlickConfig::max_offset)
      .def_readwrite("max_threshold", &SlickConfig::max_threshold)
      .def_readwrite("capacity", &SlickConfig::capacity)
      .def_readwrite("seed", &SlickConfig::seed)
      .def_property_readonly("num_blocks", &SlickConfig::num_blocks)
      .def("validate", &SlickConfig::validate)
      .def("label", &SlickConfig::label)
      .def(py::self == py::self)
      .def("__repr__", [](const SlickConfig& c) { return "SlickConfig(" + c.label() + ")"; });

  py::enum_<InsertOutcome::Kind>(m, "InsertKind")
      .value("PLACED_MAIN", InsertOutcome::Kind::PlacedMain)
      .value("PLACED_BACKYARD", InsertOutcome::Kind::PlacedBackyard)
      .value("REPLACED_EXISTING", InsertOutcome::Kind::ReplacedExisting);

  py::class_<CleaningPolicy>(m, "CleaningPolicy")
      .def_static("none", &CleaningPolicy::none)
      .def_static("naive_full", &CleaningPolicy::naive_full)
      .def_static("targeted", &CleaningPolicy::targeted, py::arg("block") = py::none())
      .def_property_readonly("block", [](const CleaningPolicy& p) { return p.block; });

  py::class_<SlickTable>(m, "SlickTable")
      .def(py::init<const SlickConfig&>(), py::arg("config"))
      .def(
          "try_insert",
          [](SlickTable& t, Key key, Value value) { return t.try_insert(key, value).kind; },
          py::arg("key"), py::arg("value"))
      .def("get", &SlickTable::get, py::arg("key"))
      .def("contains", &SlickTable::contains, py::arg("key"))
      .def("__contains__", &SlickTable::contains)
      .def("__len__", &SlickTable::size)
      .def("delete_entry", &SlickTable::delete_entry, py::arg("key"),
           py::arg("policy") = CleaningPolicy::none())
      .def(
          "clean_backyard",
          [](SlickTable& t, const CleaningPolicy& p) { return t.clean_backyard(p).moved; },
          py::arg("policy"), "Returns the number of backyard entries moved to the main table.")
      .def("stats",
           [](const SlickTable& t) {
             const TableStats s = t.stats();
             py::dict d;
             d["main_len"] = s.main_len;
             d["backyard_len"] = s.backyard_len;
             d["capacity"] = s.capacity;
             d["num_blocks"] = s.num_blocks;
             d["metadata_bits_nominal"] = s.metadata_bits_nominal;
             d["backyard_fraction"] = s.backyard_fraction;
             d["max_abs_offset_seen"] = s.max_abs_offset_seen;
             d["max_threshold_seen"] = s.max_threshold_seen;
             d["bump_events"] = s.bump_events;
             return d;
           })
      .def_property_readonly("config", &SlickTable::config)
      .def("main_size", &SlickTable::main_size)
      .def("backyard_size", &SlickTable::backyard_size);

  m.def(
      "check_invariants",
      [](const SlickTable& t) -> std::optional<py::tuple> {
        if (auto v = check_invariants(t)) return py::make_tuple(v->invariant, v->detail);
        return std::nullopt;
      },
      py::arg("table"), "None when all invariants hold, else (invariant, detail).");

  m.def("grid_configs", &bench::grid_configs, py::arg("capacity"), py::arg("seed") = 0);

  py::class_<bench::BenchRecord>(m, "BenchRecord")
      .def_readonly("impl", &bench::BenchRecord::impl)
      .def_readonly("config", &bench::BenchRecord::config)
      .def_property_readonly("phase",
                             [](const bench::BenchRecord& r) {
                               return std::string(bench::to_string(r.phase));
                             })
      .def_readonly("ops", &bench::BenchRecord::ops)
      .def_readonly("total_ns", &bench::BenchRecord::total_ns)
      .def_property_readonly("ns_per_op", &bench::BenchRecord::ns_per_op)
      .def_readonly("backyard_len", &bench::BenchRecord::backyard_len)
      .def_readonly("metadata_bits", &bench::BenchRecord::metadata_bits)
      .def_readonly("seed", &bench::BenchRecord::seed)
      .def_readonly("repetition", &bench::BenchRecord::repetition);

  m.def(
      "run_grid",
      [](std::size_t capacity, std::optional<std::size_t> ops, std::uint64_t seed,
         std::size_t reps, const std::vector<std::string>& phases,
         const std::vector<std::string>& baselines, const std::string& cleaning) {
        bench::BenchPlan plan;
        plan.capacity = capacity;
        plan.n_ops = ops.value_or(capacity);
        plan.seed = seed;
        plan.repetitions = reps;
        plan.phases = parse_phases(phases);
        plan.baselines = parse_baselines(baselines);
        plan.cleaning = parse_cleaning(cleaning);
        plan.validate();
        bench::GridResult g;
        {
          py::gil_scoped_release release;
          g = bench::run_grid(plan);
        }
        if (!g.failures.empty())
          throw bench::BenchError(g.failures.front().label + ": " + g.failures.front().message);
        return g.records;
      },
      py::arg("capacity") = 100'000, py::arg("ops") = py::none(), py::arg("seed") = 0,
      py::arg("reps") = 3,
      py::arg("phases") = std::vector<std::string>{"insert", "query", "delete"},
      py::arg("baselines") = std::vector<std::string>{"unordered_map", "ordered_map"},
      py::arg("cleaning") = "targeted");

  m.def(
      "write_csv",
      [](const std::vector<bench::BenchRecord>& records, const std::filesystem::path& path) {
        bench::write_csv(records, path);
      },
      py::arg("records"), py::arg("path"));
}
