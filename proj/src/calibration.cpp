#include "sviguard/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace sviguard {

namespace {

constexpr int kDim = 5;
using Point = std::array<double, kDim>;

// Internal optimiser coordinates t = (a_raw, beta_raw, s_raw, rho_raw, m).
// The decode below builds every SviParams invariant and the slope cap into
// the map, so any t decodes to a feasible surface:
//   rho  = sin(rho_raw)                   in [-1, 1]
//   beta = sin^2(beta_raw)                in [0, 1]
//   b    = beta * cap_eff / (1 + |rho|)   so b (1 + |rho|) <= cap_eff
//   s    = exp(clamp(s_raw))              > 0
//   a    = max(a_raw, -(b s sqrt(1-rho^2)))  so min variance >= 0
// The variance-floor expression must match SviParams::min_variance term for
// term so the clamped minimum is exactly zero in floating point.
struct Decoded {
  double a, b, s, rho, m;
};

Decoded decode(const Point& t, double cap_eff) {
  const double sb = std::sin(t[1]);
  const double beta = sb * sb;
  const double rho = std::sin(t[3]);
  const double s = std::exp(std::clamp(t[2], -30.0, 30.0));
  const double b = beta * cap_eff / (1.0 + std::abs(rho));
  const double floor = -(b * s * std::sqrt(1.0 - rho * rho));
  return {std::max(t[0], floor), b, s, rho, t[4]};
}

struct Problem {
  std::vector<double> y;
  std::vector<double> vol;
  std::vector<double> weight;
  double cap_eff;

  double operator()(const Point& t) const {
    const Decoded d = decode(t, cap_eff);
    double obj = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double dy = y[i] - d.m;
      const double v =
          std::max(d.a + d.b * (d.rho * dy + std::sqrt(dy * dy + d.s * d.s)), 0.0);
      const double r = std::sqrt(v) - vol[i];
      obj += weight[i] * r * r;
    }
    return std::isnan(obj) ? std::numeric_limits<double>::infinity() : obj;
  }
};

struct NmResult {
  Point x;
  double value;
};

// Plain Nelder-Mead with standard coefficients. Deterministic: ties in the
// vertex ordering break by vertex index. Stops when the simplex's objective
// spread falls below ftol or after max_iter iterations.
NmResult nelder_mead(const Problem& f, const Point& x0, const Point& steps,
                     int max_iter, double ftol) {
  constexpr int n = kDim;
  std::array<Point, n + 1> xs;
  std::array<double, n + 1> fs;
  xs[0] = x0;
  fs[0] = f(x0);
  for (int i = 0; i < n; ++i) {
    xs[i + 1] = x0;
    xs[i + 1][i] += steps[i];
    fs[i + 1] = f(xs[i + 1]);
  }

  std::array<int, n + 1> order;
  auto sort_order = [&] {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int l, int r) {
      if (fs[l] != fs[r]) return fs[l] < fs[r];
      return l < r;
    });
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    sort_order();
    const int best = order[0];
    const int worst = order[n];
    const int second_worst = order[n - 1];
    if (fs[worst] - fs[best] <= ftol) break;

    Point centroid{};
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < n; ++d) centroid[d] += xs[i][d];
    }
    for (int d = 0; d < n; ++d) centroid[d] /= n;

    auto blend = [&](double coef) {
      Point p;
      for (int d = 0; d < n; ++d) {
        p[d] = centroid[d] + coef * (xs[worst][d] - centroid[d]);
      }
      return p;
    };

    const Point reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < fs[best]) {
      const Point expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = fr;
      continue;
    }
    const Point contracted = blend(fr < fs[worst] ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < std::min(fr, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (int d = 0; d < n; ++d) {
        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
      }
      fs[i] = f(xs[i]);
    }
  }

  sort_order();
  return {xs[order[0]], fs[order[0]]};
}

struct StartSeed {
  Point t;
  double beta;
  double s;
  double rho;
};

// Moment-style starting point: variance level and wing slopes read directly
// off the quotes.
StartSeed heuristic_start(const Problem& pb) {
  const std::size_t n = pb.vol.size();
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pb.vol[i] < pb.vol[i0]) i0 = i;
  }
  const double m0 = pb.y[i0];
  const double vmin = pb.vol[i0] * pb.vol[i0];

  auto wing = [&](std::size_t i, double fallback) {
    const double dy = pb.y[i] - m0;
    if (std::abs(dy) < 1e-9) return fallback;
    return (pb.vol[i] * pb.vol[i] - vmin) / dy;
  };
  const double right = wing(n - 1, 0.5);
  const double left = wing(0, -0.5);

  const double b0 = std::max(0.5 * (right - left), 1e-3);
  const double rho0 = std::clamp(0.5 * (right + left) / b0, -0.99, 0.99);
  const double span = pb.y.back() - pb.y.front();
  const double s0 = std::clamp(0.25 * span, 0.05, 0.5);
  const double beta0 =
      std::clamp(b0 * (1.0 + std::abs(rho0)) / pb.cap_eff, 1e-4, 1.0);

  StartSeed seed;
  seed.beta = beta0;
  seed.s = s0;
  seed.rho = rho0;
  seed.t = {0.8 * vmin, std::asin(std::sqrt(beta0)), std::log(s0),
            std::asin(rho0), m0};
  return seed;
}

std::vector<double> quote_weights(const MarketSmile& smile, WeightScheme scheme) {
  const std::size_t n = smile.quotes.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (scheme == WeightScheme::vega) {
    const double sqt = std::sqrt(smile.ctx.maturity);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double st = smile.quotes[i].vol * sqt;
      const double d1 =
          std::log(smile.ctx.forward / smile.quotes[i].strike) / st + 0.5 * st;
      w[i] = smile.ctx.discount_factor * smile.ctx.forward * norm_pdf(d1) * sqt;
      total += w[i];
    }
    for (double& x : w) x /= total;
  }
  return w;
}

}  // namespace

MarketSmile::MarketSmile(const ForwardContext& ctx, std::vector<OptionQuote> quotes,
                         std::string day_count_note)
    : ctx(ctx), quotes(std::move(quotes)), day_count_note(std::move(day_count_note)) {
  if (this->quotes.size() < 5) {
    throw std::invalid_argument("MarketSmile: at least 5 quotes are required");
  }
  for (std::size_t i = 0; i < this->quotes.size(); ++i) {
    const OptionQuote& q = this->quotes[i];
    if (i > 0 && !(q.strike > this->quotes[i - 1].strike)) {
      throw std::invalid_argument("MarketSmile: strikes must be strictly increasing (quote " +
                                  std::to_string(i) + ")");
    }
    if (!(q.vol > 0.0) || !(q.vol < 5.0)) {
      throw std::invalid_argument("MarketSmile: vols must lie in (0, 5) (quote " +
                                  std::to_string(i) + ")");
    }
  }
}

CalibrationResult calibrate(const MarketSmile& smile, const CalibrationConfig& config) {
  if (std::isnan(config.slope_cap) || !(config.slope_cap > 0.0)) {
    throw std::invalid_argument("calibrate: slope_cap must be positive");
  }
  if (config.restarts < 1) {
    throw std::invalid_argument("calibrate: restarts must be at least 1");
  }
  if (config.max_iterations < 1) {
    throw std::invalid_argument("calibrate: max_iterations must be at least 1");
  }
  if (!(config.tolerance >= 0.0) || !std::isfinite(config.tolerance)) {
    throw std::invalid_argument("calibrate: tolerance must be finite and nonnegative");
  }

  Problem pb;
  pb.cap_eff = std::min(config.slope_cap, 4.0 / smile.ctx.maturity);
  pb.weight = quote_weights(smile, config.weights);
  pb.y.reserve(smile.quotes.size());
  pb.vol.reserve(smile.quotes.size());
  for (const OptionQuote& q : smile.quotes) {
    pb.y.push_back(std::log(q.strike / smile.ctx.forward));
    pb.vol.push_back(q.vol);
  }

  const StartSeed seed = heuristic_start(pb);

  // All randomness is drawn serially from one seeded engine, so the start
  // list (and therefore the whole fit) is reproducible.
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> starts;
  starts.reserve(static_cast<std::size_t>(config.restarts));
  starts.push_back(seed.t);
  for (int r = 1; r < config.restarts; ++r) {
    Point t = seed.t;
    t[0] += 0.05 * normal(rng);
    const double beta =
        std::clamp(seed.beta * (0.3 + 0.7 * unif(rng)) + 0.3 * unif(rng), 1e-6, 1.0);
    t[1] = std::asin(std::sqrt(beta));
    t[2] = std::log(seed.s * (0.3 + 2.7 * unif(rng)));
    t[3] = std::asin(std::clamp(seed.rho + 0.3 * normal(rng), -0.999, 0.999));
    t[4] += 0.3 * normal(rng);
    starts.push_back(t);
  }

  const Point base_steps{0.02, 0.15, 0.25, 0.15, 0.08};
  std::vector<double> objectives;
  objectives.reserve(starts.size());
  NmResult best{starts[0], std::numeric_limits<double>::infinity()};
  for (const Point& start : starts) {
    const NmResult run =
        nelder_mead(pb, start, base_steps, config.max_iterations, config.tolerance);
    objectives.push_back(run.value);
    if (run.value < best.value) best = run;  // ties keep the earlier restart
  }

  // Polish the winner with progressively smaller simplices; a fresh simplex
  // recovers from any premature collapse in the main runs.
  for (const double scale : {1e-2, 1e-4}) {
    Point steps;
    for (int d = 0; d < kDim; ++d) steps[d] = base_steps[d] * scale;
    const NmResult run =
        nelder_mead(pb, best.x, steps, config.max_iterations, config.tolerance);
    if (run.value <= best.value) best = run;
  }

  std::vector<double> sorted = objectives;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1
                            ? sorted[h]
                            : 0.5 * (sorted[h - 1] + sorted[h]);

  const Decoded d = decode(best.x, pb.cap_eff);
  const SviParams params(d.a, d.b, d.s, d.rho, d.m);
  const FitQuality quality = evaluate_fit(params, smile);
  return CalibrationResult{
      params,
      quality.rmse,
      best.value,
      std::abs(max_wing_slope(params) - pb.cap_eff) <= 1e-6,
      RestartsSummary{sorted.front(), median},
  };
}

FitQuality evaluate_fit(const SviParams& p, const MarketSmile& smile) {
  FitQuality q;
  q.residuals.reserve(smile.quotes.size());
  double sum = 0.0;
  for (const OptionQuote& quote : smile.quotes) {
    const double y = std::log(quote.strike / smile.ctx.forward);
    const double v = std::max(svi_variance(p, y), 0.0);
    const double r = std::sqrt(v) - quote.vol;
    q.residuals.push_back(r);
    sum += r * r;
  }
  q.rmse = std::sqrt(sum / static_cast<double>(smile.quotes.size()));
  return q;
}

}  // namespace sviguard
