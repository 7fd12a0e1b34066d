#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sviguard/bounds.hpp"

using namespace sviguard;

namespace {

bool within(double x, double target, double tol) {
  return std::abs(x - target) <= tol;
}

const SviParams kSteep(-0.152555, 2.073631, 0.195700, 0.904871, 0.729450);
const SviParams kMid(-0.136299, 1.072730, 0.253555, 0.817793, 0.673280);
const SviParams kShallow(-0.112306, 0.596259, 0.302274, 0.677123, 0.590297);

}  // namespace

TEST_CASE("gatheral and lee checks split the reference rows") {
  CHECK(check_gatheral(kSteep, 1.0));   // 3.95 < 4
  CHECK(!check_lee(kSteep, 1.0));       // 3.95 >= 2
  CHECK(check_gatheral(kMid, 1.0));
  CHECK(check_lee(kMid, 1.0));          // 1.95 < 2
  CHECK(check_gatheral(kShallow, 1.0));
  CHECK(check_lee(kShallow, 1.0));
  // Both bounds scale with maturity.
  CHECK(!check_gatheral(kSteep, 1.5));  // 3.95 >= 4/1.5
  CHECK(!check_lee(kMid, 1.1));
}

TEST_CASE("boundary slopes are rejected, strictly") {
  // b (1 + |rho|) exactly at the limit fails the strict comparison.
  const SviParams at_four(1.0, 4.0, 0.5, 0.0, 0.0);
  CHECK(!check_gatheral(at_four, 1.0));
  const SviParams at_two(1.0, 2.0, 0.5, 0.0, 0.0);
  CHECK(!check_lee(at_two, 1.0));
  CHECK(check_gatheral(at_two, 1.0));
}

TEST_CASE("d1 classification is a trichotomy on slope times maturity") {
  CHECK(classify_d1_limit(1.95, 1.0) == D1LimitClass::minus_infinity);
  CHECK(classify_d1_limit(3.95, 1.0) == D1LimitClass::plus_infinity);
  CHECK(classify_d1_limit(2.0, 1.0) == D1LimitClass::indeterminate_slope_two);
  CHECK(classify_d1_limit(4.0, 0.5) == D1LimitClass::indeterminate_slope_two);
  CHECK(classify_d1_limit(0.0, 3.0) == D1LimitClass::minus_infinity);
  CHECK(classify_d1_limit(1.0, 2.1) == D1LimitClass::plus_infinity);
  CHECK_THROWS_AS((void)classify_d1_limit(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)classify_d1_limit(1.0, 0.0), std::invalid_argument);
  CHECK(std::string(to_string(D1LimitClass::minus_infinity)) == "minus_infinity");
  CHECK(std::string(to_string(D1LimitClass::indeterminate_slope_two)) ==
        "indeterminate_slope_two");
  CHECK(std::string(to_string(D1LimitClass::plus_infinity)) == "plus_infinity");
}

TEST_CASE("quadratic slope bound reproduces the frozen reference setups") {
  const SlopeBoundConfig far_quote(1e6, 1e-4, ForwardContext(1.0, 1.0, 1.0));
  const double s1 = practical_slope_quadratic(far_quote);
  CHECK(within(s1, 0.53554986744117454, 1e-10));
  CHECK(within(s1, 0.5355, 1e-3));

  const SlopeBoundConfig near_quote(1500.0, 0.02793, ForwardContext(100.0, 1.0, 1.0));
  const double s2 = practical_slope_quadratic(near_quote);
  CHECK(within(s2, 0.18688270571616219, 1e-10));
  CHECK(within(s2, 0.1869, 1e-3));

  // Both setups bind well below the distribution-level limit 2/T.
  CHECK(s1 < 2.0);
  CHECK(s2 < 2.0);
}

TEST_CASE("quadratic slope bound round trips through the tail price") {
  // Feed the bound the exact price its wing model assigns to k_max and it
  // must return the slope that generated the price.
  for (const double t : {0.5, 1.0, 2.0}) {
    for (const double s0 : {0.1, 0.3, 0.5355, 1.0, 1.5}) {
      const double f = 1.0;
      const double b = 0.95;
      const double y = std::log(1e6);
      const double st = s0 * t;
      const double c_max = b * f * norm_cdf((-y + 0.5 * y * st) / std::sqrt(y * st));
      if (!(c_max > 0.0)) continue;
      const SlopeBoundConfig cfg(1e6, c_max, ForwardContext(f, b, t));
      CHECK(within(practical_slope_quadratic(cfg) / s0, 1.0, 1e-9));
    }
  }
}

TEST_CASE("quadratic slope bound is monotone in both quote parameters") {
  const ForwardContext ctx(1.0, 1.0, 1.0);
  // A pricier tail quote tolerates a steeper wing.
  double prev = 0.0;
  for (const double c : {1e-8, 1e-6, 1e-4, 1e-2}) {
    const double s = practical_slope_quadratic(SlopeBoundConfig(1e6, c, ctx));
    CHECK(s > prev);
    prev = s;
  }
  // Holding the quote fixed while its strike recedes relaxes the bound
  // toward, but never through, the distribution-level limit 2/T.
  prev = 0.0;
  for (const double k : {1e2, 1e4, 1e6, 1e8, 1e12}) {
    const double s = practical_slope_quadratic(SlopeBoundConfig(k, 1e-4, ctx));
    CHECK(s > prev);
    CHECK(s < 2.0 / ctx.maturity);
    prev = s;
  }
}

TEST_CASE("exact slope bound: frozen values, oracle agreement, dominance") {
  const SlopeBoundConfig far_quote(1e6, 1e-4, ForwardContext(1.0, 1.0, 1.0));
  const double e1 = practical_slope_exact(far_quote);
  CHECK(within(e1, 0.57470869525590825, 1e-8));
  CHECK(within(e1, oracle::practical_slope_bisect(far_quote), 1e-9));
  CHECK(e1 >= practical_slope_quadratic(far_quote));

  const SlopeBoundConfig near_quote(1500.0, 0.02793, ForwardContext(100.0, 1.0, 1.0));
  const double e2 = practical_slope_exact(near_quote);
  CHECK(within(e2, 0.23811088741856147, 1e-8));
  CHECK(within(e2, oracle::practical_slope_bisect(near_quote), 1e-9));
  CHECK(e2 >= practical_slope_quadratic(near_quote));

  // Round trip: a pure wing at the exact slope prices k_max at c_max.
  const double y_max = std::log(far_quote.k_max / far_quote.ctx.forward);
  const double price = black_call(far_quote.ctx, far_quote.k_max, std::sqrt(e1 * y_max));
  CHECK(within(price, far_quote.c_max, 1e-10));
}

TEST_CASE("exact slope bound exceeds 2/T when the quote does not constrain") {
  // A near-forward quote leaves room for an explosive wing; the bound must
  // report it rather than clip to the distribution-level limit.
  const ForwardContext ctx(1.0, 1.0, 1.0);
  const SlopeBoundConfig cfg(10.0, 0.99, ctx);
  CHECK(practical_slope_exact(cfg) > 2.0 / ctx.maturity);
}

TEST_CASE("slope bound configuration validates quote geometry") {
  const ForwardContext ctx(100.0, 0.9, 1.0);
  CHECK_THROWS_AS(SlopeBoundConfig(100.0, 1.0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(SlopeBoundConfig(50.0, 1.0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(SlopeBoundConfig(1e6, 0.0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(SlopeBoundConfig(1e6, -1.0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(SlopeBoundConfig(1e6, 90.0, ctx), std::invalid_argument);  // == B F
  CHECK_THROWS_AS(SlopeBoundConfig(1e6, 95.0, ctx), std::invalid_argument);
  CHECK_NOTHROW(SlopeBoundConfig(1e6, 89.0, ctx));
}

TEST_CASE("bound verdict aggregates the individual checks coherently") {
  const SlopeBoundConfig cfg(1e6, 1e-4, ForwardContext(1.0, 1.0, 1.0));
  for (const SviParams* p : {&kSteep, &kMid, &kShallow}) {
    const BoundVerdict v = bound_verdict(*p, cfg);
    CHECK(v.max_wing_slope == max_wing_slope(*p));
    CHECK(v.gatheral_limit == 2.0 * v.lee_limit);
    CHECK(v.passes_gatheral == check_gatheral(*p, 1.0));
    CHECK(v.passes_lee == check_lee(*p, 1.0));
    CHECK(v.passes_practical == (v.max_wing_slope < v.practical_limit));
    CHECK(v.d1_limit_class == classify_d1_limit(v.max_wing_slope, 1.0));
  }
  const BoundVerdict steep = bound_verdict(kSteep, cfg);
  CHECK(steep.passes_gatheral);
  CHECK(!steep.passes_lee);
  CHECK(!steep.passes_practical);
  CHECK(steep.d1_limit_class == D1LimitClass::plus_infinity);
  const BoundVerdict mid = bound_verdict(kMid, cfg);
  CHECK(mid.passes_gatheral);
  CHECK(mid.passes_lee);
  CHECK(!mid.passes_practical);
  CHECK(mid.d1_limit_class == D1LimitClass::minus_infinity);
}
