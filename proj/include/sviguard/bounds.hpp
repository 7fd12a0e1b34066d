#pragma once

#include "sviguard/pricing.hpp"
#include "sviguard/svi.hpp"

namespace sviguard {

// Behaviour of the Black d1 term along a linear-in-y variance wing
// v(y) = S y as y -> +inf, classified by the total wing slope S * T.
enum class D1LimitClass {
  minus_infinity,          // S T < 2: d1 -> -inf, call price eventually decays
  indeterminate_slope_two,  // S T = 2: d1 -> a finite constant
  plus_infinity,           // S T > 2: d1 -> +inf, call price tends to B F
};

// Large-strike admissibility of the steep wing b (1 + |rho|) at maturity T.
// check_gatheral: b (1 + |rho|) <  4 / T (strict).
// check_lee:      b (1 + |rho|) <  2 / T (strict); this is the stronger
// moment/monotonicity condition, and implies the Gatheral one.
// Both throw std::invalid_argument on nonpositive or nonfinite maturity.
bool check_gatheral(const SviParams& p, double maturity);
bool check_lee(const SviParams& p, double maturity);

// Classifies the d1 limit for a wing of slope S (variance per unit y) at
// maturity T. wing_slope must be nonnegative and maturity positive, both
// finite (std::invalid_argument otherwise).
D1LimitClass classify_d1_limit(double wing_slope, double maturity);

// Configuration of the practical wing-slope bound: the most extreme quoted
// strike k_max and the smallest price c_max a call can be quoted or risk-
// managed at. Requires k_max > forward and 0 < c_max < B F, all finite
// (std::invalid_argument otherwise).
struct SlopeBoundConfig {
  double k_max;
  double c_max;
  ForwardContext ctx;

  SlopeBoundConfig(double k_max, double c_max, const ForwardContext& ctx);
};

// Largest wing slope S such that a pure wing v(y) = S y keeps the call price
// at k_max at or below c_max, in closed form from the dominant d1 term:
// with y_max = ln(k_max / F), q = Phi^-1(c_max / (B F)), c = q / sqrt(y_max),
//
//   x = c + sqrt(c^2 + 2),  S = x^2 / T.
//
// Quadratic in the sense of solving the dominant quadratic in sqrt(S T).
// Throws std::domain_error if c_max / (B F) lies outside (0, 1).
double practical_slope_quadratic(const SlopeBoundConfig& cfg);

// Same bound without the dominant-term approximation: inverts the full Black
// formula at k_max for the vol sigma* that prices the call at exactly c_max,
// then returns S = sigma*^2 / y_max (the wing model is v(y) = S y, so the
// full variance budget at y_max is spent on the wing). Always at least as
// large as the quadratic bound. May exceed 2 / T when c_max is close to B F,
// in which case no admissible wing is constrained by the quote.
double practical_slope_exact(const SlopeBoundConfig& cfg);

// Aggregated admissibility verdict for one surface against one bound
// configuration.
struct BoundVerdict {
  double max_wing_slope;   // b (1 + |rho|)
  double gatheral_limit;   // 4 / T
  double lee_limit;        // 2 / T
  double practical_limit;  // practical_slope_quadratic(cfg)
  bool passes_gatheral;    // max_wing_slope < gatheral_limit
  bool passes_lee;         // max_wing_slope < lee_limit
  bool passes_practical;   // max_wing_slope < practical_limit
  D1LimitClass d1_limit_class;
};

// Evaluates all three slope checks plus the d1 classification. The maturity
// is taken from cfg.ctx.
BoundVerdict bound_verdict(const SviParams& p, const SlopeBoundConfig& cfg);

// Stable spelling used in reports: "minus_infinity", "indeterminate_slope_two"
// or "plus_infinity".
const char* to_string(D1LimitClass c);

}  // namespace sviguard
