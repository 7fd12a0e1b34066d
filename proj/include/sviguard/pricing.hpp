#pragma once

#include <stdexcept>
#include <string>

namespace sviguard {

// Market frame for undiscounted-forward option pricing: forward level of the
// underlying, discount factor to expiry, and year fraction to expiry.
// All three must be finite; forward and maturity strictly positive, discount
// factor in (0, 1]. Violations throw std::invalid_argument.
struct ForwardContext {
  double forward;
  double discount_factor;
  double maturity;

  ForwardContext(double forward, double discount_factor, double maturity);
};

// A single market quote: strike level and Black implied volatility as a
// decimal (0.235 means 23.5%). strike must be positive and vol nonnegative,
// both finite; violations throw std::invalid_argument.
struct OptionQuote {
  double strike;
  double vol;

  OptionQuote(double strike, double vol);
};

// Standard normal cumulative distribution function. Implemented via erfc so
// the deep lower tail keeps full relative accuracy (needed when differencing
// prices of far out-of-the-money options).
double norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Inverse of norm_cdf. Accepts p strictly inside (0, 1); throws
// std::domain_error otherwise. Accuracy: |norm_cdf(norm_cdf_inv(p)) - p| is
// at the rounding level of norm_cdf across the full open interval.
double norm_cdf_inv(double p);

// Undiscounted-forward (Black) call price
//   C = B [ F Phi(d1) - K Phi(d2) ],  d1 = ln(F/K)/(vol sqrt(T)) + vol sqrt(T)/2.
// vol = 0 returns the discounted intrinsic value. The result always satisfies
// B max(F - K, 0) <= C <= B F exactly in floating point; put/call parity
// C - P = B (F - K) holds to rounding. Throws std::domain_error on
// nonpositive or nonfinite strike, or negative vol.
double black_call(const ForwardContext& ctx, double strike, double vol);

// Black put price, same conventions as black_call.
double black_put(const ForwardContext& ctx, double strike, double vol);

// Thrown by implied_vol when no volatility can reproduce the given price.
class ImpliedVolError : public std::domain_error {
 public:
  enum class Kind {
    below_intrinsic,  // price <= B max(F - K, 0)
    above_forward,    // price >= B F
  };

  ImpliedVolError(Kind kind, const std::string& what)
      : std::domain_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Inverts black_call in vol for a given strike and call price. The price must
// lie strictly between the discounted intrinsic value and B F; otherwise an
// ImpliedVolError is thrown with the violated side in kind(). The returned
// vol is converged as a root in vol space (bracket width ~1e-13 relative),
// not merely to a price tolerance, so round trips stay accurate for extreme
// strikes where prices are tiny.
double implied_vol(const ForwardContext& ctx, double strike, double call_price);

}  // namespace sviguard
