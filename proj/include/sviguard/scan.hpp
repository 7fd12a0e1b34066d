#pragma once

#include <vector>

#include "sviguard/bounds.hpp"
#include "sviguard/pricing.hpp"
#include "sviguard/svi.hpp"

namespace sviguard {

// Log-uniform moneyness grid for the scanners. Moneyness is K / F. Requires
// 0 < min_moneyness < max_moneyness, finite, and points_per_decade >= 16
// (std::invalid_argument otherwise). Defaults cover the far right wing, two
// decades below the forward to seven above.
struct ScanGrid {
  double min_moneyness = 1e-2;
  double max_moneyness = 1e7;
  int points_per_decade = 64;
};

// The grid points themselves: log-uniform, first point exactly min_moneyness,
// last point exactly max_moneyness, at least two points.
std::vector<double> moneyness_grid(const ScanGrid& grid);

// Half-open in nothing: a closed interval of moneyness levels.
struct MoneynessInterval {
  double lo;
  double hi;
};

// A maximal stretch of the grid on which the call price increases with
// strike (consecutive difference above the detection tolerance
// 1e-16 * B * F). Interval endpoints interior to the grid are refined by
// bisection on the local price slope to better than 1e-3 relative moneyness;
// endpoints at the grid edge are reported unrefined.
//
// max_price is the largest call price attained on the stretch.
// numerically_negligible is set when the price at the stretch's left endpoint
// is below 1e-18 * B * F, i.e. the detected increase emerges from prices at
// the floating-point noise floor rather than from an economically meaningful
// level. Such entries are still listed and still count as violations.
struct MonotonicityViolation {
  MoneynessInterval interval;
  double max_price;
  bool numerically_negligible;
};

// Scans the call price K -> black_call(ctx, K, sqrt(v(ln(K/F)))) over the
// grid for violations of decreasing-in-strike monotonicity beyond the
// forward. A correct surface produces none: the call price must decrease to
// zero as the strike grows. Throws std::domain_error if total variance is
// nonpositive anywhere on the grid.
//
// Honours SVI_GUARD_THREADS (see below).
std::vector<MonotonicityViolation> scan_call_monotonicity(
    const TotalVarianceCurve& curve, const ForwardContext& ctx,
    const ScanGrid& grid);

// Scans g_denominator over the grid and returns the maximal intervals on
// which g < 0 (butterfly arbitrage, negative implied density). Endpoints
// interior to the grid are refined by bisection on the sign of g to 1e-6
// absolute in log-moneyness. Throws std::domain_error if total variance is
// nonpositive anywhere on the grid.
//
// Honours SVI_GUARD_THREADS (see below).
std::vector<MoneynessInterval> scan_butterfly(const TotalVarianceCurve& curve,
                                              const ScanGrid& grid);

// Full diagnostic for one surface: both scans plus the slope verdict.
//
// price_argmax_moneyness locates where the call price finally starts
// decreasing for good: the refined right endpoint of the last monotonicity
// violation at or beyond moneyness 1, the grid max if the price is still
// increasing at the grid end, and the first grid point >= 1 when no such
// violation exists (an arbitrage-free surface peaks at the forward).
struct ArbitrageReport {
  std::vector<MonotonicityViolation> monotonicity_violations;
  std::vector<MoneynessInterval> negative_g_intervals;
  double price_argmax_moneyness;
  BoundVerdict verdict;
};

ArbitrageReport full_report(const SviParams& p, const ForwardContext& ctx,
                            const ScanGrid& grid, const SlopeBoundConfig& cfg);

// Number of worker threads the scanners fan out to. Reads SVI_GUARD_THREADS
// (positive integer, capped at 256); unset, empty or invalid falls back to
// std::thread::hardware_concurrency(). Small grids are evaluated serially.
// Results are bit-identical regardless of the thread count.
unsigned scan_thread_count();

}  // namespace sviguard
