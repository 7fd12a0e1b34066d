#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sviguard/calibration.hpp"

namespace sviguard {

// One data row of a smile CSV file, kept exactly as parsed. vol_percent is
// the quoted vol in percent (23.1 means 23.1%); the percent-to-decimal
// conversion happens once, in make_smile, because (v / 100) * 100 does not
// round-trip for many doubles.
struct SmileFileRow {
  double strike;
  double vol_percent;
};

// Smile CSV format:
//   - '#' starts a comment line; blank lines are skipped,
//   - the first data line must be the header `strike,vol_percent`,
//   - each following data line is two comma-separated decimal numbers.
// A comment of the form `# day_count: <text>` is captured and surfaced
// through make_smile as the smile's day_count_note.

// Parses a smile CSV from a stream. `name` labels the stream in error
// messages. Throws std::runtime_error naming the 1-based line number on any
// malformed line; values are range-checked later by MarketSmile.
// day_count_note, when non-null, receives the captured day-count comment
// (empty if absent).
std::vector<SmileFileRow> read_smile_rows(std::istream& in,
                                          const std::string& name,
                                          std::string* day_count_note = nullptr);

// Same, reading from a file path. Throws std::runtime_error if the file
// cannot be opened.
std::vector<SmileFileRow> read_smile_rows_file(const std::string& path,
                                               std::string* day_count_note = nullptr);

// Writes rows back out in the same format, values at 17 significant digits,
// so write(read(file)) preserves every parsed double exactly.
void write_smile_rows(std::ostream& out, const std::vector<SmileFileRow>& rows);

// Converts file rows to a MarketSmile (percent -> decimal happens here).
// MarketSmile construction enforces the quote invariants.
MarketSmile make_smile(const std::vector<SmileFileRow>& rows,
                       const ForwardContext& ctx,
                       std::string day_count_note = {});

// Convenience wrapper: read_smile_rows_file + make_smile.
MarketSmile read_smile_csv(const std::string& path, const ForwardContext& ctx);

// FNV-1a 64-bit hash, used to echo input files into reports by content.
std::uint64_t fnv1a64(const void* data, std::size_t size);

// Hash of a file's raw bytes, formatted "fnv1a:<16 hex digits>". Throws
// std::runtime_error if the file cannot be opened.
std::string hash_file(const std::string& path);

// Shortest formatting of a double that parses back to the identical value
// (printf %.17g). Shared by every writer in the tool so output is
// byte-deterministic.
std::string format_double(double x);

}  // namespace sviguard
