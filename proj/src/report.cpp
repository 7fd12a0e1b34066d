#include "sviguard/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "sviguard/smile_io.hpp"
#include "sviguard/version.hpp"

namespace sviguard {

namespace {

void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ += ',';
    need_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  need_comma_.push_back(false);
  out_ += '{';
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  need_comma_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  need_comma_.push_back(false);
  out_ += '[';
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  need_comma_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separate();
  append_escaped(out_, name);
  out_ += ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  if (std::isfinite(v)) {
    out_ += format_double(v);
  } else if (std::isnan(v)) {
    out_ += "\"nan\"";
  } else {
    out_ += v > 0 ? "\"inf\"" : "\"-inf\"";
  }
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  append_escaped(out_, v);
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) {
  separate();
  append_escaped(out_, v);
  return *this;
}

namespace {

void write_params(JsonWriter& w, const SviParams& p) {
  w.begin_object();
  w.kv("a", p.a).kv("b", p.b).kv("s", p.s).kv("rho", p.rho).kv("m", p.m);
  w.end_object();
}

void write_interval(JsonWriter& w, const MoneynessInterval& iv) {
  w.begin_object();
  w.kv("lo", iv.lo).kv("hi", iv.hi);
  w.end_object();
}

void write_verdict(JsonWriter& w, const BoundVerdict& v) {
  w.begin_object();
  w.kv("max_wing_slope", v.max_wing_slope);
  w.kv("gatheral_limit", v.gatheral_limit);
  w.kv("lee_limit", v.lee_limit);
  w.kv("practical_limit", v.practical_limit);
  w.kv("passes_gatheral", v.passes_gatheral);
  w.kv("passes_lee", v.passes_lee);
  w.kv("passes_practical", v.passes_practical);
  w.kv("d1_limit_class", to_string(v.d1_limit_class));
  w.end_object();
}

void write_arbitrage(JsonWriter& w, const ArbitrageReport& r) {
  w.begin_object();
  w.key("monotonicity_violations").begin_array();
  for (const MonotonicityViolation& v : r.monotonicity_violations) {
    w.begin_object();
    w.kv("lo", v.interval.lo);
    w.kv("hi", v.interval.hi);
    w.kv("max_price", v.max_price);
    w.kv("numerically_negligible", v.numerically_negligible);
    w.end_object();
  }
  w.end_array();
  w.key("negative_g_intervals").begin_array();
  for (const MoneynessInterval& iv : r.negative_g_intervals) write_interval(w, iv);
  w.end_array();
  w.kv("price_argmax_moneyness", r.price_argmax_moneyness);
  w.key("verdict");
  write_verdict(w, r.verdict);
  w.end_object();
}

}  // namespace

std::string to_json(const ReportDocument& doc) {
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", static_cast<long long>(kReportSchemaVersion));
  w.kv("tool_version", kVersion);
  w.kv("command", doc.inputs.command);

  w.key("inputs").begin_object();
  if (doc.inputs.smile_file) w.kv("smile_file", *doc.inputs.smile_file);
  if (doc.inputs.smile_hash) w.kv("smile_hash", *doc.inputs.smile_hash);
  w.kv("forward", doc.inputs.ctx.forward);
  w.kv("discount_factor", doc.inputs.ctx.discount_factor);
  w.kv("maturity", doc.inputs.ctx.maturity);
  if (doc.inputs.params) {
    w.key("params");
    write_params(w, *doc.inputs.params);
  }
  if (doc.inputs.slope_cap) w.kv("slope_cap", *doc.inputs.slope_cap);
  if (doc.inputs.restarts) w.kv("restarts", static_cast<long long>(*doc.inputs.restarts));
  if (doc.inputs.seed) w.kv("seed", *doc.inputs.seed);
  if (doc.inputs.weights) w.kv("weights", *doc.inputs.weights);
  if (doc.inputs.grid) {
    w.key("grid").begin_object();
    w.kv("min_moneyness", doc.inputs.grid->min_moneyness);
    w.kv("max_moneyness", doc.inputs.grid->max_moneyness);
    w.kv("points_per_decade", static_cast<long long>(doc.inputs.grid->points_per_decade));
    w.end_object();
  }
  if (doc.inputs.k_max) w.kv("k_max", *doc.inputs.k_max);
  if (doc.inputs.c_max) w.kv("c_max", *doc.inputs.c_max);
  w.end_object();

  if (doc.calibration) {
    const CalibrationResult& c = *doc.calibration;
    w.key("calibration").begin_object();
    w.key("params");
    write_params(w, c.params);
    w.kv("rmse", c.rmse);
    w.kv("objective", c.objective);
    w.kv("constraint_active", c.constraint_active);
    w.key("restarts_summary").begin_object();
    w.kv("best_objective", c.restarts_summary.best_objective);
    w.kv("median_objective", c.restarts_summary.median_objective);
    w.end_object();
    w.end_object();
  }

  if (doc.arbitrage) {
    w.key("arbitrage_report");
    write_arbitrage(w, *doc.arbitrage);
  }
  if (doc.slope_quadratic) w.kv("practical_slope_quadratic", *doc.slope_quadratic);
  if (doc.slope_exact) w.kv("practical_slope_exact", *doc.slope_exact);

  w.end_object();
  return w.str() + "\n";
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed while writing: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace sviguard
