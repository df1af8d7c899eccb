#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "g2g/model.hpp"

namespace g2g {

// Summary of one measurement campaign. All values in seconds; std_s uses the
// unbiased (n - 1) estimator and the CI is the Student's t interval for the
// mean.
struct DelayStats {
  std::size_t n = 0;
  double min_s = 0.0;
  double max_s = 0.0;
  double mean_s = 0.0;
  double std_s = 0.0;
  double ci95_lo_s = 0.0;
  double ci95_hi_s = 0.0;
  double width_s = 0.0;
};

// Throws DataError("insufficient data") for fewer than two delays.
DelayStats compute_stats(std::span<const double> delays);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);
// x such that I_x(a, b) = p.
double inverse_incomplete_beta(double a, double b, double p);

// Inverse CDF of Student's t with `dof` degrees of freedom.
double t_quantile(double p, double dof);

// Right-open bins [origin + j w, origin + (j + 1) w).
struct Histogram {
  double bin_width_s = 0.0;
  double origin_s = 0.0;
  std::vector<std::uint64_t> counts;

  double bin_left(std::size_t j) const {
    return origin_s + static_cast<double>(j) * bin_width_s;
  }
};

// origin defaults to floor(min / w) * w.
Histogram histogram(std::span<const double> delays, double bin_width_s,
                    std::optional<double> origin_s = std::nullopt);

// Pearson correlation of (x[i], x[i + lag]).
double lag_autocorrelation(std::span<const double> delays, std::size_t lag);

struct TrapezoidFit {
  // Shift anchored at the sample minimum (t_proc and t_min are not separable
  // from data, so the whole shift is reported as t_proc).
  TrapezoidModel estimate;
  double width_s = 0.0;          // max - min of the sample
  double theory_width_s = 0.0;   // 1/f_cam + 1/f_dis
  double shrinkage_s = 0.0;      // theory_width - width
  // Median shrinkage of n-sample draws from `estimate`, by Monte Carlo.
  double expected_shrinkage_s = 0.0;
};

// Throws DataError for fewer than 10 delays.
TrapezoidFit fit_trapezoid(std::span<const double> delays, double f_cam, double f_dis,
                           std::uint64_t seed = 1, int monte_carlo_runs = 201);

}  // namespace g2g
