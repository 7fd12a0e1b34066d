#pragma once

namespace sviguard {

// Raw SVI parameterisation of annualised implied variance as a function of
// log-moneyness y = ln(K/F):
//
//   v(y) = a + b [ rho (y - m) + sqrt((y - m)^2 + s^2) ]
//
// Invariants enforced at construction (std::invalid_argument on violation):
//   b >= 0, s > 0, rho in [-1, 1], all parameters finite, and the global
//   variance minimum a + b s sqrt(1 - rho^2) >= 0 so v(y) >= 0 for all y.
struct SviParams {
  double a;
  double b;
  double s;
  double rho;
  double m;

  SviParams(double a, double b, double s, double rho, double m);

  // Global minimum of v over y: a + b s sqrt(1 - rho^2). Nonnegative by
  // construction.
  double min_variance() const;
};

// Asymptotic slopes of v(y): v(y) ~ left * |y| as y -> -inf and
// v(y) ~ right * y as y -> +inf.
struct WingSlopes {
  double left;   // b (1 - rho)
  double right;  // b (1 + rho)
};

// Implied variance v(y) and its first two derivatives in y. The derivatives
// are analytic, not finite differences:
//   v'(y)  = b [ rho + d / sqrt(d^2 + s^2) ],          d = y - m
//   v''(y) = b s^2 / (d^2 + s^2)^(3/2)
double svi_variance(const SviParams& p, double y);
double svi_variance_dy(const SviParams& p, double y);
double svi_variance_d2y(const SviParams& p, double y);

WingSlopes asymptotic_slopes(const SviParams& p);

// Steeper of the two wing slopes, b (1 + |rho|). This is the quantity the
// large-strike bounds constrain.
double max_wing_slope(const SviParams& p);

// An SVI variance slice pinned to a maturity, exposing total variance
// w(y) = v(y) * maturity. maturity must be positive and finite
// (std::invalid_argument otherwise).
struct TotalVarianceCurve {
  SviParams params;
  double maturity;

  TotalVarianceCurve(const SviParams& params, double maturity);

  double total_variance(double y) const;
};

// Butterfly-arbitrage denominator of the implied-density / local-variance
// ratio, in terms of total variance w and its y-derivatives:
//
//   g(y) = 1 - (y / w) w' + (w'^2 / 4) (-1/4 - 1/w + y^2 / w^2) + w'' / 2
//
// The implied risk-neutral density at y has the sign of g(y); g < 0 is a
// butterfly arbitrage. Throws std::domain_error when w(y) <= 0, where the
// expression is undefined.
double g_denominator(const TotalVarianceCurve& curve, double y);

}  // namespace sviguard
