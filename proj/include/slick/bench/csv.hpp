#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "slick/bench/harness.hpp"

namespace slick::bench {

inline constexpr std::string_view kCsvHeader =
    "impl,config,phase,ops,total_ns,ns_per_op,backyard_len,metadata_bits,seed,repetition";

// Writes the header and one row per record, sorted by (impl, config, phase,
// repetition). Non-applicable fields are empty; lines end in LF.
void write_csv(std::span<const BenchRecord> records, std::ostream& out);

// Throws BenchError naming the path on I/O failure.
void write_csv(std::span<const BenchRecord> records, const std::filesystem::path& path);

// Parses a file produced by write_csv. Columns after the standard ones are
// ignored. Throws BenchError with path and line on malformed input.
std::vector<BenchRecord> read_csv(const std::filesystem::path& path);
std::vector<BenchRecord> read_csv(std::istream& in, std::string_view source = "<stream>");

}  // namespace slick::bench
