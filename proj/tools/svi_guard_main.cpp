// svi_guard: volatility-smile arbitrage diagnostics.
//
// Subcommands:
//   calibrate  fit an SVI smile to quotes, then scan the fit for arbitrage
//   scan       scan a given SVI parameter set for arbitrage
//   bound      print the practical wing-slope bound for a quote setup
//
// Exit codes: 0 clean, 1 input or usage error, 2 when a scan reports
// monotonicity violations or negative-density intervals.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sviguard/bounds.hpp"
#include "sviguard/calibration.hpp"
#include "sviguard/report.hpp"
#include "sviguard/scan.hpp"
#include "sviguard/smile_io.hpp"
#include "sviguard/svi.hpp"
#include "sviguard/version.hpp"

namespace {

using namespace sviguard;

// Flags shared by every subcommand that prices anything.
struct CtxFlags {
  double forward = 1.0;
  double discount = 1.0;
  double maturity = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--forward", forward, "Forward level of the underlying")
        ->capture_default_str();
    cmd->add_option("--discount", discount, "Discount factor to expiry")
        ->capture_default_str();
    cmd->add_option("--T,--maturity", maturity, "Year fraction to expiry")
        ->capture_default_str();
  }

  ForwardContext make() const { return ForwardContext(forward, discount, maturity); }
};

struct GridFlags {
  ScanGrid grid;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-min", grid.min_moneyness, "Smallest moneyness scanned")
        ->capture_default_str();
    cmd->add_option("--grid-max", grid.max_moneyness, "Largest moneyness scanned")
        ->capture_default_str();
    cmd->add_option("--points-per-decade", grid.points_per_decade,
                    "Scan resolution per moneyness decade")
        ->capture_default_str();
  }
};

struct BoundFlags {
  double k_max = 0.0;  // resolved against the context after parsing
  double c_max = 0.0;
  CLI::Option* k_opt = nullptr;
  CLI::Option* c_opt = nullptr;

  void attach(CLI::App* cmd) {
    k_opt = cmd->add_option("--k-max", k_max,
                            "Most extreme quoted strike (default 1e6 * forward)");
    c_opt = cmd->add_option("--c-max", c_max,
                            "Smallest usable call quote (default 1e-4 * B * F)");
  }

  SlopeBoundConfig make(const ForwardContext& ctx) const {
    const double k = k_opt->count() ? k_max : 1e6 * ctx.forward;
    const double c = c_opt->count() ? c_max : 1e-4 * ctx.discount_factor * ctx.forward;
    return SlopeBoundConfig(k, c, ctx);
  }
};

void emit(const ReportDocument& doc, const std::string& out_path) {
  const std::string json = to_json(doc);
  if (out_path.empty()) {
    std::cout << json;
  } else {
    write_text_atomic(out_path, json);
  }
}

int scan_exit_code(const ArbitrageReport& report) {
  const bool found = !report.monotonicity_violations.empty() ||
                     !report.negative_g_intervals.empty();
  return found ? 2 : 0;
}

void print_scan_summary(const ArbitrageReport& report) {
  std::cerr << "svi_guard: " << report.monotonicity_violations.size()
            << " monotonicity violation(s), " << report.negative_g_intervals.size()
            << " negative-density interval(s), price argmax at moneyness "
            << format_double(report.price_argmax_moneyness) << "\n";
}

void write_plot_data(const std::string& path, const SviParams& params,
                     const ForwardContext& ctx, const ScanGrid& grid) {
  const TotalVarianceCurve curve(params, ctx.maturity);
  std::string csv = "moneyness,implied_vol,call_price,g\n";
  for (const double m : moneyness_grid(grid)) {
    const double y = std::log(m);
    const double v = svi_variance(params, y);
    const double vol = std::sqrt(std::max(v, 0.0));
    csv += format_double(m);
    csv += ',';
    csv += format_double(vol);
    csv += ',';
    csv += format_double(black_call(ctx, m * ctx.forward, vol));
    csv += ',';
    csv += format_double(g_denominator(curve, y));
    csv += '\n';
  }
  write_text_atomic(path, csv);
}

int run_calibrate(const std::string& smile_path, const CtxFlags& ctx_flags,
                  const GridFlags& grid_flags, const BoundFlags& bound_flags,
                  CalibrationConfig config, const std::string& weights_name,
                  const std::string& out_path) {
  const ForwardContext ctx = ctx_flags.make();
  const MarketSmile smile = read_smile_csv(smile_path, ctx);
  const SlopeBoundConfig bound_cfg = bound_flags.make(ctx);
  config.weights = weights_name == "vega" ? WeightScheme::vega : WeightScheme::uniform;

  const CalibrationResult fit = calibrate(smile, config);
  const ArbitrageReport report =
      full_report(fit.params, ctx, grid_flags.grid, bound_cfg);

  ReportDocument doc{
      ReportInputs{
          "calibrate", ctx, smile_path, hash_file(smile_path), std::nullopt,
          config.slope_cap, config.restarts, config.seed, weights_name,
          grid_flags.grid, bound_cfg.k_max, bound_cfg.c_max},
      fit, report, std::nullopt, std::nullopt};
  emit(doc, out_path);

  std::cerr << "svi_guard: fit rmse " << format_double(fit.rmse)
            << ", max wing slope " << format_double(max_wing_slope(fit.params))
            << (fit.constraint_active ? " (cap active)" : "") << "\n";
  print_scan_summary(report);
  return scan_exit_code(report);
}

int run_scan(const SviParams& params, const CtxFlags& ctx_flags,
             const GridFlags& grid_flags, const BoundFlags& bound_flags,
             const std::string& plot_path, const std::string& out_path) {
  const ForwardContext ctx = ctx_flags.make();
  const SlopeBoundConfig bound_cfg = bound_flags.make(ctx);
  const ArbitrageReport report = full_report(params, ctx, grid_flags.grid, bound_cfg);

  ReportDocument doc{
      ReportInputs{
          "scan", ctx, std::nullopt, std::nullopt, params, std::nullopt,
          std::nullopt, std::nullopt, std::nullopt, grid_flags.grid,
          bound_cfg.k_max, bound_cfg.c_max},
      std::nullopt, report, std::nullopt, std::nullopt};
  emit(doc, out_path);

  if (!plot_path.empty()) {
    write_plot_data(plot_path, params, ctx, grid_flags.grid);
  }
  print_scan_summary(report);
  return scan_exit_code(report);
}

int run_bound(const CtxFlags& ctx_flags, const BoundFlags& bound_flags, bool exact,
              const std::string& out_path) {
  const ForwardContext ctx = ctx_flags.make();
  const SlopeBoundConfig cfg = bound_flags.make(ctx);
  const double quadratic = practical_slope_quadratic(cfg);
  std::optional<double> exact_slope;
  if (exact) exact_slope = practical_slope_exact(cfg);

  std::cerr << "svi_guard: practical_slope_quadratic = " << format_double(quadratic)
            << "\n";
  if (exact_slope) {
    std::cerr << "svi_guard: practical_slope_exact = " << format_double(*exact_slope)
              << "\n";
  }

  ReportDocument doc{
      ReportInputs{
          "bound", ctx, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
          std::nullopt, std::nullopt, std::nullopt, std::nullopt,
          cfg.k_max, cfg.c_max},
      std::nullopt, std::nullopt, quadratic, exact_slope};
  emit(doc, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volatility-smile arbitrage diagnostics for SVI surfaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Fit an SVI smile to quotes and scan the fit");
  std::string smile_path;
  cal->add_option("smile", smile_path, "Smile CSV (strike,vol_percent)")->required();
  CtxFlags cal_ctx;
  cal_ctx.attach(cal);
  GridFlags cal_grid;
  cal_grid.attach(cal);
  BoundFlags cal_bound;
  cal_bound.attach(cal);
  CalibrationConfig cal_config;
  cal->add_option("--slope-cap", cal_config.slope_cap,
                  "Cap on the fitted wing slope b(1+|rho|) (default unconstrained)");
  cal->add_option("--restarts", cal_config.restarts, "Multistart optimiser runs")
      ->capture_default_str();
  cal->add_option("--seed", cal_config.seed, "Seed for the multistart perturbations")
      ->capture_default_str();
  std::string weights_name = "uniform";
  cal->add_option("--weights", weights_name, "Residual weighting: uniform or vega")
      ->check(CLI::IsMember({"uniform", "vega"}))
      ->capture_default_str();
  std::string cal_out;
  cal->add_option("--out", cal_out, "Write the JSON report here (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "Scan a given SVI surface for arbitrage");
  double pa = 0.0, pb = 0.0, ps = 0.0, prho = 0.0, pm = 0.0;
  scan->add_option("--a", pa, "SVI a (variance level)")->required();
  scan->add_option("--b", pb, "SVI b (wing scale)")->required();
  scan->add_option("--s", ps, "SVI s (smoothing)")->required();
  scan->add_option("--rho", prho, "SVI rho (skew)")->required();
  scan->add_option("--m", pm, "SVI m (shift)")->required();
  CtxFlags scan_ctx;
  scan_ctx.attach(scan);
  GridFlags scan_grid;
  scan_grid.attach(scan);
  BoundFlags scan_bound;
  scan_bound.attach(scan);
  std::string plot_path;
  scan->add_option("--plot-data", plot_path,
                   "Also write a moneyness,implied_vol,call_price,g CSV here");
  std::string scan_out;
  scan->add_option("--out", scan_out, "Write the JSON report here (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "Print the practical wing-slope bound");
  CtxFlags bound_ctx;
  bound_ctx.attach(bound);
  BoundFlags bound_bound;
  bound_bound.attach(bound);
  bool exact = false;
  bound->add_flag("--exact", exact, "Also invert the full pricing formula");
  std::string bound_out;
  bound->add_option("--out", bound_out, "Write the JSON report here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cal->parsed()) {
      return run_calibrate(smile_path, cal_ctx, cal_grid, cal_bound, cal_config,
                           weights_name, cal_out);
    }
    if (scan->parsed()) {
      return run_scan(SviParams(pa, pb, ps, prho, pm), scan_ctx, scan_grid,
                      scan_bound, plot_path, scan_out);
    }
    return run_bound(bound_ctx, bound_bound, exact, bound_out);
  } catch (const std::exception& e) {
    std::cerr << "svi_guard: error: " << e.what() << "\n";
    return 1;
  }
}
