#include "sviguard/smile_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sviguard {

namespace {

constexpr const char* kHeader = "strike,vol_percent";
constexpr const char* kDayCountPrefix = "day_count:";

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& msg) {
  throw std::runtime_error(name + ": line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view field, const std::string& name, std::size_t line) {
  const std::string_view f = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
    fail(name, line, "expected a decimal number, got '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<SmileFileRow> read_smile_rows(std::istream& in, const std::string& name,
                                          std::string* day_count_note) {
  if (day_count_note != nullptr) day_count_note->clear();
  std::vector<SmileFileRow> rows;
  bool header_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const std::string_view comment = trim(body.substr(1));
      if (day_count_note != nullptr && comment.rfind(kDayCountPrefix, 0) == 0) {
        *day_count_note = std::string(trim(comment.substr(std::string_view(kDayCountPrefix).size())));
      }
      continue;
    }
    if (!header_seen) {
      if (body != kHeader) {
        fail(name, lineno,
             std::string("expected header '") + kHeader + "', got '" + std::string(body) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
      fail(name, lineno, "expected exactly two comma-separated fields");
    }
    rows.push_back({parse_number(body.substr(0, comma), name, lineno),
                    parse_number(body.substr(comma + 1), name, lineno)});
  }
  if (!header_seen) {
    throw std::runtime_error(name + ": missing '" + kHeader + "' header");
  }
  return rows;
}

std::vector<SmileFileRow> read_smile_rows_file(const std::string& path,
                                               std::string* day_count_note) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open smile file: " + path);
  return read_smile_rows(in, path, day_count_note);
}

void write_smile_rows(std::ostream& out, const std::vector<SmileFileRow>& rows) {
  out << kHeader << '\n';
  for (const SmileFileRow& row : rows) {
    out << format_double(row.strike) << ',' << format_double(row.vol_percent) << '\n';
  }
}

MarketSmile make_smile(const std::vector<SmileFileRow>& rows, const ForwardContext& ctx,
                       std::string day_count_note) {
  std::vector<OptionQuote> quotes;
  quotes.reserve(rows.size());
  for (const SmileFileRow& row : rows) {
    quotes.emplace_back(row.strike, row.vol_percent / 100.0);
  }
  return MarketSmile(ctx, std::move(quotes), std::move(day_count_note));
}

MarketSmile read_smile_csv(const std::string& path, const ForwardContext& ctx) {
  std::string note;
  const std::vector<SmileFileRow> rows = read_smile_rows_file(path, &note);
  return make_smile(rows, ctx, std::move(note));
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace sviguard
