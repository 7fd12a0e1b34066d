#include "sviguard/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sviguard {

namespace {

// Detection tolerance for an increasing consecutive price difference,
// relative to the discounted forward B F.
constexpr double kMonotonicityTol = 1e-16;

// A violation whose starting price is below this (again relative to B F) is
// flagged numerically negligible.
constexpr double kNegligiblePrice = 1e-18;

// Grids below this size are evaluated serially; thread fan-out costs more
// than it saves.
constexpr std::size_t kParallelThreshold = 4096;

// Target bisection widths for endpoint refinement: log-moneyness for the
// price scan (1e-4, comfortably under the 1e-3 promise), y for the g scan.
constexpr double kPriceRefineWidth = 1e-4;
constexpr double kGRefineWidth = 1e-6;

// Half-width, in log-moneyness, of the centred difference used to probe the
// local price slope during refinement.
constexpr double kSlopeProbeH = 5e-5;

template <typename F>
std::vector<double> parallel_map(std::size_t n, F&& f) {
  std::vector<double> out(n);
  const unsigned workers = scan_thread_count();
  if (n < kParallelThreshold || workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::exception_ptr first_error;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= n) break;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

void validate_grid(const ScanGrid& grid) {
  if (!(grid.min_moneyness > 0.0) || !std::isfinite(grid.min_moneyness) ||
      !(grid.max_moneyness > grid.min_moneyness) || !std::isfinite(grid.max_moneyness)) {
    throw std::invalid_argument(
        "ScanGrid: moneyness range must satisfy 0 < min < max, finite");
  }
  if (grid.points_per_decade < 16) {
    throw std::invalid_argument("ScanGrid: points_per_decade must be at least 16");
  }
}

// Variance at every grid point, throwing if total variance is nonpositive
// anywhere. Computed serially so the error, when any, is deterministic.
std::vector<double> grid_variances(const TotalVarianceCurve& curve,
                                   const std::vector<double>& pts) {
  std::vector<double> v(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v[i] = svi_variance(curve.params, std::log(pts[i]));
    if (!(v[i] * curve.maturity > 0.0)) {
      throw std::domain_error("scan: total variance must be positive across the grid");
    }
  }
  return v;
}

double call_price_at(const TotalVarianceCurve& curve, const ForwardContext& ctx,
                     double moneyness) {
  const double v = svi_variance(curve.params, std::log(moneyness));
  return black_call(ctx, moneyness * ctx.forward, std::sqrt(std::max(v, 0.0)));
}

// Sign of the local price slope in strike at the given moneyness, probed by
// a centred difference over a fixed log-moneyness half-width.
int price_slope_sign(const TotalVarianceCurve& curve, const ForwardContext& ctx,
                     double log_moneyness) {
  const double up = call_price_at(curve, ctx, std::exp(log_moneyness + kSlopeProbeH));
  const double dn = call_price_at(curve, ctx, std::exp(log_moneyness - kSlopeProbeH));
  return up > dn ? 1 : -1;
}

// Bisects for the slope sign change inside [la, lb] (log-moneyness). The
// caller guarantees sign(la) != sign(lb).
double bisect_price_slope(const TotalVarianceCurve& curve, const ForwardContext& ctx,
                          double la, double lb, int sign_at_la) {
  while (lb - la > kPriceRefineWidth) {
    const double mid = 0.5 * (la + lb);
    if (price_slope_sign(curve, ctx, mid) == sign_at_la) {
      la = mid;
    } else {
      lb = mid;
    }
  }
  return std::exp(0.5 * (la + lb));
}

// Sign of g at log-moneyness y; degenerate zero-variance points count as
// nonnegative (a point mass is not a butterfly violation).
int g_sign(const TotalVarianceCurve& curve, double y) {
  if (!(curve.total_variance(y) > 0.0)) return 1;
  return g_denominator(curve, y) < 0.0 ? -1 : 1;
}

double bisect_g_sign(const TotalVarianceCurve& curve, double ya, double yb,
                     int sign_at_ya) {
  while (yb - ya > kGRefineWidth) {
    const double mid = 0.5 * (ya + yb);
    if (g_sign(curve, mid) == sign_at_ya) {
      ya = mid;
    } else {
      yb = mid;
    }
  }
  return std::exp(0.5 * (ya + yb));
}

// A maximal run of grid cells on which a predicate held: cells
// [first_cell, last_cell], i.e. grid points [first_cell, last_cell + 1].
struct CellRun {
  std::size_t first_cell;
  std::size_t last_cell;
};

std::vector<CellRun> collect_runs(const std::vector<char>& flags) {
  std::vector<CellRun> runs;
  std::size_t i = 0;
  while (i < flags.size()) {
    if (flags[i]) {
      std::size_t j = i;
      while (j + 1 < flags.size() && flags[j + 1]) ++j;
      runs.push_back({i, j});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return runs;
}

struct MonotonicityScanResult {
  std::vector<MonotonicityViolation> violations;
  double price_argmax;
};

MonotonicityScanResult scan_monotonicity_impl(const TotalVarianceCurve& curve,
                                              const ForwardContext& ctx,
                                              const ScanGrid& grid) {
  const std::vector<double> pts = moneyness_grid(grid);
  const std::vector<double> variances = grid_variances(curve, pts);
  const std::vector<double> prices = parallel_map(pts.size(), [&](std::size_t i) {
    return black_call(ctx, pts[i] * ctx.forward, std::sqrt(variances[i]));
  });

  const double scale = ctx.discount_factor * ctx.forward;
  const double tol = kMonotonicityTol * scale;
  std::vector<char> increasing(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    increasing[i] = prices[i + 1] - prices[i] > tol;
  }

  MonotonicityScanResult result{{}, 0.0};
  for (const CellRun& run : collect_runs(increasing)) {
    const std::size_t first_pt = run.first_cell;
    const std::size_t last_pt = run.last_cell + 1;

    double lo = pts[first_pt];
    if (first_pt > 0) {
      // The price stops decreasing somewhere between the previous grid point
      // and the first increasing cell. Prefer the bracket ending at the run's
      // first point; if the slope has not yet turned positive there, the
      // turning point sits inside the first increasing cell instead.
      const double la = std::log(pts[first_pt - 1]);
      const double lb = std::log(pts[first_pt]);
      if (price_slope_sign(curve, ctx, lb) > 0) {
        if (price_slope_sign(curve, ctx, la) < 0) {
          lo = bisect_price_slope(curve, ctx, la, lb, -1);
        }
      } else if (price_slope_sign(curve, ctx, std::log(pts[first_pt + 1])) > 0) {
        lo = bisect_price_slope(curve, ctx, lb, std::log(pts[first_pt + 1]), -1);
      }
    }

    double hi = pts[last_pt];
    if (last_pt + 1 < pts.size()) {
      // Mirror image: the increase ends between the run's last point and the
      // next grid point.
      const double la = std::log(pts[last_pt]);
      const double lb = std::log(pts[last_pt + 1]);
      if (price_slope_sign(curve, ctx, la) > 0) {
        if (price_slope_sign(curve, ctx, lb) < 0) {
          hi = bisect_price_slope(curve, ctx, la, lb, 1);
        }
      } else if (price_slope_sign(curve, ctx, std::log(pts[last_pt - 1])) > 0) {
        hi = bisect_price_slope(curve, ctx, std::log(pts[last_pt - 1]), la, 1);
      }
    }

    double max_price = 0.0;
    for (std::size_t i = first_pt; i <= last_pt; ++i) {
      max_price = std::max(max_price, prices[i]);
    }
    const bool negligible = prices[first_pt] < kNegligiblePrice * scale;
    result.violations.push_back({{lo, hi}, max_price, negligible});
  }

  // Where the price finally starts decreasing for good: the right end of the
  // last increase at or beyond the forward, else the forward itself (first
  // grid point at or above moneyness 1).
  result.price_argmax = pts.back();
  const auto at_forward = std::lower_bound(pts.begin(), pts.end(), 1.0);
  if (at_forward != pts.end()) result.price_argmax = *at_forward;
  for (const MonotonicityViolation& v : result.violations) {
    if (v.interval.hi >= 1.0) result.price_argmax = v.interval.hi;
  }
  return result;
}

}  // namespace

unsigned scan_thread_count() {
  if (const char* env = std::getenv("SVI_GUARD_THREADS"); env && *env != '\0') {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && parsed >= 1) {
      return static_cast<unsigned>(std::min(parsed, 256L));
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : std::min(hc, 256u);
}

std::vector<double> moneyness_grid(const ScanGrid& grid) {
  validate_grid(grid);
  const double lmin = std::log(grid.min_moneyness);
  const double lmax = std::log(grid.max_moneyness);
  const double decades = (lmax - lmin) / std::log(10.0);
  const auto intervals =
      static_cast<std::size_t>(std::ceil(decades * grid.points_per_decade));
  std::vector<double> pts(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    pts[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) /
                                 static_cast<double>(intervals));
  }
  pts.front() = grid.min_moneyness;
  pts.back() = grid.max_moneyness;
  return pts;
}

std::vector<MonotonicityViolation> scan_call_monotonicity(
    const TotalVarianceCurve& curve, const ForwardContext& ctx,
    const ScanGrid& grid) {
  return scan_monotonicity_impl(curve, ctx, grid).violations;
}

std::vector<MoneynessInterval> scan_butterfly(const TotalVarianceCurve& curve,
                                              const ScanGrid& grid) {
  const std::vector<double> pts = moneyness_grid(grid);
  grid_variances(curve, pts);  // validates w > 0 across the grid
  const std::vector<double> g = parallel_map(pts.size(), [&](std::size_t i) {
    return g_denominator(curve, std::log(pts[i]));
  });

  std::vector<char> negative(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) negative[i] = g[i] < 0.0;
  // Point flags to cell runs: a run of negative points [i..j] spans cells
  // [i..j] in the interval sense used below (points i..j inclusive).
  std::vector<MoneynessInterval> intervals;
  std::size_t i = 0;
  while (i < pts.size()) {
    if (!negative[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < pts.size() && negative[j + 1]) ++j;

    double lo = pts[i];
    if (i > 0) {
      lo = bisect_g_sign(curve, std::log(pts[i - 1]), std::log(pts[i]), 1);
    }
    double hi = pts[j];
    if (j + 1 < pts.size()) {
      hi = bisect_g_sign(curve, std::log(pts[j]), std::log(pts[j + 1]), -1);
    }
    intervals.push_back({lo, hi});
    i = j + 1;
  }
  return intervals;
}

ArbitrageReport full_report(const SviParams& p, const ForwardContext& ctx,
                            const ScanGrid& grid, const SlopeBoundConfig& cfg) {
  const TotalVarianceCurve curve(p, ctx.maturity);
  MonotonicityScanResult mono = scan_monotonicity_impl(curve, ctx, grid);
  return ArbitrageReport{
      std::move(mono.violations),
      scan_butterfly(curve, grid),
      mono.price_argmax,
      bound_verdict(p, cfg),
  };
}

}  // namespace sviguard
