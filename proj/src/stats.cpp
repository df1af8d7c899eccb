#include "g2g/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "g2g/error.hpp"

namespace g2g {

namespace {

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DataError("incomplete_beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double inverse_incomplete_beta(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0)) throw DataError("inverse_incomplete_beta: a and b must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw DataError("inverse_incomplete_beta: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return p;

  // Newton steps kept inside a shrinking bracket; bisection when Newton
  // leaves it.
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  const double lb = log_beta(a, b);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = incomplete_beta(a, b, x) - p;
    if (f == 0.0) return x;
    (f < 0.0 ? lo : hi) = x;
    const double log_density = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb;
    double next = x - f / std::exp(log_density);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x ||
        hi - lo <= std::numeric_limits<double>::min()) {
      return next;
    }
    x = next;
  }
  return x;
}

double t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw DataError("t_quantile: p must lie in (0, 1)");
  if (!(dof >= 1.0) || !std::isfinite(dof)) throw DataError("t_quantile: dof must be >= 1");
  if (p == 0.5) return 0.0;

  // Two-sided tail mass 2q relates to the incomplete beta through
  // P(|T| > t) = I_{dof / (dof + t^2)}(dof / 2, 1 / 2).
  const double q = p < 0.5 ? p : 1.0 - p;
  const double two_q = 2.0 * q;
  double t;
  if (two_q < 0.5) {
    const double x = inverse_incomplete_beta(0.5 * dof, 0.5, two_q);
    t = std::sqrt(dof * (1.0 - x) / x);
  } else {
    // Solve for 1 - x directly to avoid cancellation near x = 1.
    const double y = inverse_incomplete_beta(0.5, 0.5 * dof, 1.0 - two_q);
    t = std::sqrt(dof * y / (1.0 - y));
  }
  return p < 0.5 ? -t : t;
}

DelayStats compute_stats(std::span<const double> delays) {
  if (delays.size() < 2) throw DataError("insufficient data");
  DelayStats s;
  s.n = delays.size();
  const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
  s.min_s = *lo;
  s.max_s = *hi;
  double sum = 0.0;
  for (double d : delays) sum += d;
  const double n = static_cast<double>(s.n);
  // Rounding can push the mean of near-identical values past an extreme.
  s.mean_s = std::clamp(sum / n, s.min_s, s.max_s);
  double ss = 0.0;
  for (double d : delays) ss += (d - s.mean_s) * (d - s.mean_s);
  s.std_s = std::sqrt(ss / (n - 1.0));
  const double half = t_quantile(0.975, n - 1.0) * s.std_s / std::sqrt(n);
  s.ci95_lo_s = s.mean_s - half;
  s.ci95_hi_s = s.mean_s + half;
  s.width_s = s.max_s - s.min_s;
  return s;
}

Histogram histogram(std::span<const double> delays, double bin_width_s,
                    std::optional<double> origin_s) {
  if (!(bin_width_s > 0.0) || !std::isfinite(bin_width_s)) {
    throw DataError("bin width must be > 0");
  }
  if (delays.empty()) throw DataError("insufficient data");
  const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
  Histogram h;
  h.bin_width_s = bin_width_s;
  h.origin_s = origin_s.value_or(std::floor(*lo / bin_width_s) * bin_width_s);
  if (*lo < h.origin_s) throw DataError("delay below histogram origin");

  auto bin_of = [&](double x) {
    return static_cast<std::size_t>(std::floor((x - h.origin_s) / bin_width_s));
  };
  h.counts.assign(bin_of(*hi) + 1, 0);
  for (double d : delays) ++h.counts[std::min(bin_of(d), h.counts.size() - 1)];
  return h;
}

double lag_autocorrelation(std::span<const double> delays, std::size_t lag) {
  if (lag < 1) throw DataError("lag must be >= 1");
  if (delays.size() < lag + 2) throw DataError("insufficient data");
  const std::size_t pairs = delays.size() - lag;
  auto head = delays.subspan(0, pairs);
  auto tail = delays.subspan(lag, pairs);
  auto mean = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mx = mean(head);
  const double my = mean(tail);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double dx = head[i] - mx;
    const double dy = tail[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TrapezoidFit fit_trapezoid(std::span<const double> delays, double f_cam, double f_dis,
                           std::uint64_t seed, int monte_carlo_runs) {
  if (delays.size() < 10) throw DataError("insufficient data for extremes");
  if (monte_carlo_runs < 1) throw DataError("monte_carlo_runs must be >= 1");
  const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());

  TrapezoidFit fit;
  fit.estimate = TrapezoidModel{*lo, 0.0, f_cam, f_dis};
  fit.estimate.validate();
  fit.width_s = *hi - *lo;
  fit.theory_width_s = 1.0 / f_cam + 1.0 / f_dis;
  fit.shrinkage_s = fit.theory_width_s - fit.width_s;

  Rng rng(seed);
  std::vector<double> shrinkage(static_cast<std::size_t>(monte_carlo_runs));
  for (auto& s : shrinkage) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (std::size_t i = 0; i < delays.size(); ++i) {
      const double d = sample_delay(fit.estimate, rng);
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
    s = fit.theory_width_s - (mx - mn);
  }
  auto mid = shrinkage.begin() + static_cast<std::ptrdiff_t>(shrinkage.size() / 2);
  std::nth_element(shrinkage.begin(), mid, shrinkage.end());
  fit.expected_shrinkage_s = *mid;
  return fit;
}

}  // namespace g2g
