#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sviguard/calibration.hpp"
#include "sviguard/scan.hpp"

namespace sviguard {

// Minimal ordered JSON writer. Keys appear exactly in call order and doubles
// are formatted with format_double, so a given document serialises to the
// same bytes on every run; that determinism is part of the tool's contract.
// Nonfinite doubles (possible only in input echoes, for example
// slope_cap = inf) are emitted as the strings "inf", "-inf", "nan" since
// JSON has no literal for them.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);

  JsonWriter& value(double v);
  JsonWriter& value(bool v);
  JsonWriter& value(long long v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);

  // key + value in one call.
  template <typename T>
  JsonWriter& kv(const std::string& name, const T& v) {
    key(name);
    return value(v);
  }

  const std::string& str() const { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> need_comma_;
  bool after_key_ = false;
};

// Echo of everything that determined a run. Optional fields are present only
// for the commands they apply to and are serialised only when set.
struct ReportInputs {
  std::string command;
  ForwardContext ctx;
  std::optional<std::string> smile_file;
  std::optional<std::string> smile_hash;
  std::optional<SviParams> params;
  std::optional<double> slope_cap;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> weights;
  std::optional<ScanGrid> grid;
  std::optional<double> k_max;
  std::optional<double> c_max;
};

// Top-level report document. schema_version and tool_version are stamped by
// to_json.
struct ReportDocument {
  ReportInputs inputs;
  std::optional<CalibrationResult> calibration;
  std::optional<ArbitrageReport> arbitrage;
  std::optional<double> slope_quadratic;  // bound command
  std::optional<double> slope_exact;      // bound command, with --exact
};

std::string to_json(const ReportDocument& doc);

// Writes text to path via a sibling temporary file plus rename, so readers
// never observe a partially written report. Throws std::runtime_error on I/O
// failure.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace sviguard
