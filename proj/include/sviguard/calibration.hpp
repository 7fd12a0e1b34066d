#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sviguard/pricing.hpp"
#include "sviguard/svi.hpp"

namespace sviguard {

// A market smile to calibrate against: at least 5 quotes, strictly increasing
// strikes, vols in (0, 5) as decimals. Violations throw
// std::invalid_argument. day_count_note is informational pass-through (for
// example "ACT/365") and does not affect any computation.
struct MarketSmile {
  ForwardContext ctx;
  std::vector<OptionQuote> quotes;
  std::string day_count_note;

  MarketSmile(const ForwardContext& ctx, std::vector<OptionQuote> quotes,
              std::string day_count_note = {});
};

enum class WeightScheme {
  uniform,  // w_i = 1 / n
  vega,     // w_i proportional to the Black vega at the quote, normalised
};

// Calibration controls. slope_cap bounds the fitted b (1 + |rho|); the
// effective cap is min(slope_cap, 4 / maturity) so the fit always satisfies
// the Gatheral large-strike bound even for slope_cap = +inf. restarts is the
// number of multistart optimiser runs (>= 1); seed makes them reproducible.
// Identical (smile, config) inputs produce bit-identical results.
struct CalibrationConfig {
  double slope_cap = std::numeric_limits<double>::infinity();
  int restarts = 16;
  WeightScheme weights = WeightScheme::uniform;
  std::uint64_t seed = 42;
  int max_iterations = 5000;    // Nelder-Mead iterations per restart
  double tolerance = 1e-16;     // objective-spread convergence threshold
};

// Objective values across the multistart runs, before the polish pass.
struct RestartsSummary {
  double best_objective;
  double median_objective;
};

// Result of calibrate(). params satisfies every SviParams invariant plus
// b (1 + |rho|) <= effective cap + 1e-9. rmse is the unweighted root mean
// square vol residual; objective is the weighted sum of squared vol
// residuals actually minimised. constraint_active reports whether the fitted
// slope sits within 1e-6 of the effective cap.
struct CalibrationResult {
  SviParams params;
  double rmse;
  double objective;
  bool constraint_active;
  RestartsSummary restarts_summary;
};

// Least-squares SVI fit in vol space:
//
//   minimise  sum_i w_i (sqrt(v(y_i)) - vol_i)^2,   y_i = ln(K_i / F)
//
// over valid SviParams with b (1 + |rho|) <= min(slope_cap, 4 / T). The
// domain is searched with seeded multistart Nelder-Mead in a transformed
// coordinate system that builds the constraints in (so every iterate is a
// valid surface), then the best run is polished. Ties between restarts are
// broken by the lowest restart index. Throws std::invalid_argument on
// nonpositive or NaN slope_cap, restarts < 1, max_iterations < 1, or a
// nonfinite tolerance.
CalibrationResult calibrate(const MarketSmile& smile,
                            const CalibrationConfig& config);

// Residual diagnostics for fixed parameters on a smile. residuals[i] is
// model vol minus market vol at quote i; rmse is their unweighted root mean
// square.
struct FitQuality {
  double rmse;
  std::vector<double> residuals;
};

FitQuality evaluate_fit(const SviParams& p, const MarketSmile& smile);

}  // namespace sviguard
