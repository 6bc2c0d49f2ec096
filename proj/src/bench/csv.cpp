#include "slick/bench/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace slick::bench {
namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string format_ns_per_op(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

}  // namespace

void write_csv(std::span<const BenchRecord> records, std::ostream& out) {
  std::vector<const BenchRecord*> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRecord* a, const BenchRecord* b) {
    return std::tie(a->impl, a->config, a->phase, a->repetition) <
           std::tie(b->impl, b->config, b->phase, b->repetition);
  });

  out << kCsvHeader << '\n';
  for (const BenchRecord* r : rows) {
    out << r->impl << ',' << r->config << ',' << to_string(r->phase) << ',' << r->ops << ','
        << r->total_ns << ',' << format_ns_per_op(r->ns_per_op()) << ',';
    if (r->backyard_len) out << *r->backyard_len;
    out << ',';
    if (r->metadata_bits) out << *r->metadata_bits;
    out << ',' << r->seed << ',' << r->repetition << '\n';
  }
}

void write_csv(std::span<const BenchRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BenchError("cannot open " + path.string() + " for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw BenchError("write to " + path.string() + " failed");
}

std::vector<BenchRecord> read_csv(std::istream& in, std::string_view source) {
  auto fail = [&](std::size_t line_no, const std::string& what) -> BenchError {
    return BenchError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  if (!std::getline(in, line)) throw fail(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool standard = line == kCsvHeader;
  const bool extended = line.rfind(std::string(kCsvHeader) + ",", 0) == 0;
  if (!standard && !extended) throw fail(1, "unexpected header '" + line + "'");

  std::vector<BenchRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() < kColumns)
      throw fail(line_no, "expected " + std::to_string(kColumns) + " fields, got " +
                              std::to_string(f.size()));
    BenchRecord r;
    r.impl = std::string(f[0]);
    r.config = std::string(f[1]);
    const auto phase = parse_phase(f[2]);
    if (!phase) throw fail(line_no, "unknown phase '" + std::string(f[2]) + "'");
    r.phase = *phase;
    if (!parse_number(f[3], r.ops)) throw fail(line_no, "bad ops");
    if (!parse_number(f[4], r.total_ns)) throw fail(line_no, "bad total_ns");
    double ns_per_op = 0;
    if (!parse_number(f[5], ns_per_op)) throw fail(line_no, "bad ns_per_op");
    if (!f[6].empty()) {
      std::size_t v = 0;
      if (!parse_number(f[6], v)) throw fail(line_no, "bad backyard_len");
      r.backyard_len = v;
    }
    if (!f[7].empty()) {
      std::size_t v = 0;
      if (!parse_number(f[7], v)) throw fail(line_no, "bad metadata_bits");
      r.metadata_bits = v;
    }
    if (!parse_number(f[8], r.seed)) throw fail(line_no, "bad seed");
    if (!parse_number(f[9], r.repetition)) throw fail(line_no, "bad repetition");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<BenchRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BenchError("cannot open " + path.string() + " for reading");
  return read_csv(in, path.string());
}

}  // namespace slick::bench
