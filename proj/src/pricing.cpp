#include "sviguard/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sviguard {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_finite_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// Rational approximation for the standard normal quantile (Wichura's
// algorithm AS 241, PPND16 variant), accurate to ~1e-16 relative across the
// full open interval. Input restricted to (0, 0.5] by the caller.
double quantile_as241(double p) {
  constexpr double split1 = 0.425;
  constexpr double split2 = 5.0;
  constexpr double const1 = 0.180625;
  constexpr double const2 = 1.6;

  const double q = p - 0.5;
  if (std::abs(q) <= split1) {
    const double r = const1 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }

  double r = std::sqrt(-std::log(p));
  double x;
  if (r <= split2) {
    r -= const2;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258) * r +
            3.64784832476320460504) * r + 5.76949722146069140550) * r +
          4.63033784615654529590) * r + 1.42343711074968357734) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940) * r +
          2.05319162663775882187) * r + 1.0);
  } else {
    r -= split2;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580) * r +
          5.46378491116411436990) * r + 6.65790464350110377720) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return -x;
}

// Quantile on (0, 0.5], one Halley step on top of AS 241. The residual is
// formed from the erfc-based norm_cdf, which is relative-accurate in this
// tail, so the step polishes rather than degrades.
double quantile_lower(double p) {
  double x = quantile_as241(p);
  const double pdf = norm_pdf(x);
  if (pdf > 1e-290) {
    const double u = (norm_cdf(x) - p) / pdf;
    const double step = u / (1.0 + 0.5 * x * u);
    if (std::isfinite(step)) x -= step;
  }
  return x;
}

struct D1D2 {
  double d1;
  double d2;
};

// d1/d2 for total vol st = vol * sqrt(T) > 0.
D1D2 d_terms(double forward, double strike, double st) {
  const double l = std::log(forward / strike);
  return {l / st + 0.5 * st, l / st - 0.5 * st};
}

void validate_strike_vol(double strike, double vol, const char* fn) {
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw std::domain_error(std::string(fn) + ": strike must be positive and finite");
  }
  if (!(vol >= 0.0) || !std::isfinite(vol)) {
    throw std::domain_error(std::string(fn) + ": vol must be nonnegative and finite");
  }
}

}  // namespace

ForwardContext::ForwardContext(double forward, double discount_factor,
                               double maturity)
    : forward(forward), discount_factor(discount_factor), maturity(maturity) {
  require_finite_positive(forward, "ForwardContext: forward");
  require_finite_positive(maturity, "ForwardContext: maturity");
  if (!(discount_factor > 0.0) || !(discount_factor <= 1.0)) {
    throw std::invalid_argument("ForwardContext: discount_factor must lie in (0, 1]");
  }
}

OptionQuote::OptionQuote(double strike, double vol) : strike(strike), vol(vol) {
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw std::invalid_argument("OptionQuote: strike must be positive and finite");
  }
  if (!(vol >= 0.0) || !std::isfinite(vol)) {
    throw std::invalid_argument("OptionQuote: vol must be nonnegative and finite");
  }
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf_inv(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("norm_cdf_inv: p must lie strictly inside (0, 1)");
  }
  // Work on the lower half only; the upper tail of norm_cdf saturates in
  // double precision, so the residual there carries no information.
  if (p > 0.5) return -quantile_lower(1.0 - p);
  return quantile_lower(p);
}

double black_call(const ForwardContext& ctx, double strike, double vol) {
  validate_strike_vol(strike, vol, "black_call");
  const double f = ctx.forward;
  const double b = ctx.discount_factor;
  const double st = vol * std::sqrt(ctx.maturity);
  if (st == 0.0) return b * std::max(f - strike, 0.0);
  const auto [d1, d2] = d_terms(f, strike, st);
  if (strike >= f) {
    // Out-of-the-money side: the direct formula has no intrinsic
    // cancellation, clamp only against a negative rounding residue.
    return b * std::max(f * norm_cdf(d1) - strike * norm_cdf(d2), 0.0);
  }
  // In the money: intrinsic plus the (out-of-the-money) put keeps the lower
  // bound B (F - K) exact in floating point.
  const double put = std::max(strike * norm_cdf(-d2) - f * norm_cdf(-d1), 0.0);
  return b * ((f - strike) + put);
}

double black_put(const ForwardContext& ctx, double strike, double vol) {
  validate_strike_vol(strike, vol, "black_put");
  const double f = ctx.forward;
  const double b = ctx.discount_factor;
  const double st = vol * std::sqrt(ctx.maturity);
  if (st == 0.0) return b * std::max(strike - f, 0.0);
  const auto [d1, d2] = d_terms(f, strike, st);
  if (strike >= f) {
    const double call = std::max(f * norm_cdf(d1) - strike * norm_cdf(d2), 0.0);
    return b * ((strike - f) + call);
  }
  return b * std::max(strike * norm_cdf(-d2) - f * norm_cdf(-d1), 0.0);
}

double implied_vol(const ForwardContext& ctx, double strike, double call_price) {
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw std::domain_error("implied_vol: strike must be positive and finite");
  }
  const double f = ctx.forward;
  const double b = ctx.discount_factor;
  const double t = ctx.maturity;
  const double intrinsic = b * std::max(f - strike, 0.0);
  const double cap = b * f;
  if (!(call_price > intrinsic)) {
    throw ImpliedVolError(ImpliedVolError::Kind::below_intrinsic,
                          "implied_vol: price at or below discounted intrinsic value");
  }
  if (!(call_price < cap)) {
    throw ImpliedVolError(ImpliedVolError::Kind::above_forward,
                          "implied_vol: price at or above the discounted forward");
  }

  // Bracket the root, expanding both ways if the seed bracket misses it. The
  // price is strictly increasing in vol, tends to the intrinsic value as
  // vol -> 0 and to B F as vol -> inf, so a bracket always exists.
  double lo = 1e-8;
  double hi = 10.0;
  while (lo > 1e-300 && black_call(ctx, strike, lo) > call_price) lo *= 0.25;
  for (int i = 0; i < 1200 && black_call(ctx, strike, hi) < call_price; ++i) hi *= 2.0;

  // Safeguarded Newton on the log of the price: every step stays inside
  // [lo, hi], falling back to bisection, so convergence is the bracket's.
  // The log step matters in the wings, where the price decays like
  // exp(-d1^2 / 2): a plain price-space step sheds one e-fold per iteration
  // and would crawl across hundreds of decades, while the log step crosses
  // them at once and keeps Newton's quadratic rate at the root. Iterate on
  // the bracket width in vol, not on a price tolerance; tiny tail prices
  // would meet any price tolerance long before the vol has converged.
  double sigma = 0.5 * (lo + hi);
  const double sqt = std::sqrt(t);
  const double log_target = std::log(call_price);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double price = black_call(ctx, strike, sigma);
    const double diff = price - call_price;
    if (diff == 0.0) return sigma;
    if (diff > 0.0) {
      hi = sigma;
    } else {
      lo = sigma;
    }
    double next = 0.0;
    const double st = sigma * sqt;
    const double d1 = std::log(f / strike) / st + 0.5 * st;
    const double vega = b * f * norm_pdf(d1) * sqt;
    if (vega > 0.0 && price > 0.0) {
      next = sigma - (std::log(price) - log_target) * (price / vega);
    }
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    sigma = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sviguard
