#include "sviguard/svi.hpp"

#include <cmath>
#include <stdexcept>

namespace sviguard {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string("SviParams: ") + what + " must be finite");
  }
}

}  // namespace

SviParams::SviParams(double a, double b, double s, double rho, double m)
    : a(a), b(b), s(s), rho(rho), m(m) {
  require_finite(a, "a");
  require_finite(m, "m");
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("SviParams: b must be nonnegative and finite");
  }
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("SviParams: s must be positive and finite");
  }
  if (!(rho >= -1.0) || !(rho <= 1.0)) {
    throw std::invalid_argument("SviParams: rho must lie in [-1, 1]");
  }
  if (!(min_variance() >= 0.0)) {
    throw std::invalid_argument(
        "SviParams: minimum variance a + b s sqrt(1 - rho^2) must be nonnegative");
  }
}

double SviParams::min_variance() const {
  return a + b * s * std::sqrt(1.0 - rho * rho);
}

double svi_variance(const SviParams& p, double y) {
  const double d = y - p.m;
  return p.a + p.b * (p.rho * d + std::sqrt(d * d + p.s * p.s));
}

double svi_variance_dy(const SviParams& p, double y) {
  const double d = y - p.m;
  return p.b * (p.rho + d / std::sqrt(d * d + p.s * p.s));
}

double svi_variance_d2y(const SviParams& p, double y) {
  const double d = y - p.m;
  const double r = std::sqrt(d * d + p.s * p.s);
  return p.b * p.s * p.s / (r * r * r);
}

WingSlopes asymptotic_slopes(const SviParams& p) {
  return {p.b * (1.0 - p.rho), p.b * (1.0 + p.rho)};
}

double max_wing_slope(const SviParams& p) {
  return p.b * (1.0 + std::abs(p.rho));
}

TotalVarianceCurve::TotalVarianceCurve(const SviParams& params, double maturity)
    : params(params), maturity(maturity) {
  if (!(maturity > 0.0) || !std::isfinite(maturity)) {
    throw std::invalid_argument("TotalVarianceCurve: maturity must be positive and finite");
  }
}

double TotalVarianceCurve::total_variance(double y) const {
  return svi_variance(params, y) * maturity;
}

double g_denominator(const TotalVarianceCurve& curve, double y) {
  const double t = curve.maturity;
  const double w = svi_variance(curve.params, y) * t;
  if (!(w > 0.0)) {
    throw std::domain_error("g_denominator: total variance must be positive");
  }
  const double wp = svi_variance_dy(curve.params, y) * t;
  const double wpp = svi_variance_d2y(curve.params, y) * t;
  return 1.0 - (y / w) * wp +
         0.25 * wp * wp * (-0.25 - 1.0 / w + (y * y) / (w * w)) + 0.5 * wpp;
}

}  // namespace sviguard
