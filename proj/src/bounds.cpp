#include "sviguard/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sviguard {

namespace {

void require_maturity(double t, const char* fn) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(fn) + ": maturity must be positive and finite");
  }
}

}  // namespace

bool check_gatheral(const SviParams& p, double maturity) {
  require_maturity(maturity, "check_gatheral");
  return max_wing_slope(p) < 4.0 / maturity;
}

bool check_lee(const SviParams& p, double maturity) {
  require_maturity(maturity, "check_lee");
  return max_wing_slope(p) < 2.0 / maturity;
}

D1LimitClass classify_d1_limit(double wing_slope, double maturity) {
  if (!(wing_slope >= 0.0) || !std::isfinite(wing_slope)) {
    throw std::invalid_argument("classify_d1_limit: wing_slope must be nonnegative and finite");
  }
  require_maturity(maturity, "classify_d1_limit");
  const double total_slope = wing_slope * maturity;
  if (total_slope < 2.0) return D1LimitClass::minus_infinity;
  if (total_slope > 2.0) return D1LimitClass::plus_infinity;
  return D1LimitClass::indeterminate_slope_two;
}

SlopeBoundConfig::SlopeBoundConfig(double k_max, double c_max,
                                   const ForwardContext& ctx)
    : k_max(k_max), c_max(c_max), ctx(ctx) {
  if (!(k_max > ctx.forward) || !std::isfinite(k_max)) {
    throw std::invalid_argument("SlopeBoundConfig: k_max must exceed the forward and be finite");
  }
  const double cap = ctx.discount_factor * ctx.forward;
  if (!(c_max > 0.0) || !(c_max < cap)) {
    throw std::invalid_argument("SlopeBoundConfig: c_max must lie strictly inside (0, B F)");
  }
}

double practical_slope_quadratic(const SlopeBoundConfig& cfg) {
  const double ratio = cfg.c_max / (cfg.ctx.discount_factor * cfg.ctx.forward);
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::domain_error("practical_slope_quadratic: c_max / (B F) must lie inside (0, 1)");
  }
  const double y_max = std::log(cfg.k_max / cfg.ctx.forward);
  const double c = norm_cdf_inv(ratio) / std::sqrt(y_max);
  const double x = c + std::sqrt(c * c + 2.0);
  return x * x / cfg.ctx.maturity;
}

double practical_slope_exact(const SlopeBoundConfig& cfg) {
  const double y_max = std::log(cfg.k_max / cfg.ctx.forward);
  const double sigma = implied_vol(cfg.ctx, cfg.k_max, cfg.c_max);
  return sigma * sigma / y_max;
}

BoundVerdict bound_verdict(const SviParams& p, const SlopeBoundConfig& cfg) {
  const double t = cfg.ctx.maturity;
  const double slope = max_wing_slope(p);
  BoundVerdict v{
      slope,
      4.0 / t,
      2.0 / t,
      practical_slope_quadratic(cfg),
      false,
      false,
      false,
      classify_d1_limit(slope, t),
  };
  v.passes_gatheral = slope < v.gatheral_limit;
  v.passes_lee = slope < v.lee_limit;
  v.passes_practical = slope < v.practical_limit;
  return v;
}

const char* to_string(D1LimitClass c) {
  switch (c) {
    case D1LimitClass::minus_infinity:
      return "minus_infinity";
    case D1LimitClass::indeterminate_slope_two:
      return "indeterminate_slope_two";
    case D1LimitClass::plus_infinity:
      return "plus_infinity";
  }
  return "unknown";
}

}  // namespace sviguard
