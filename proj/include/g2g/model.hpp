#pragma once

#include <random>

namespace g2g {

using Rng = std::mt19937_64;

// Analytic glass-to-glass delay distribution of a camera -> PC -> display
// chain: a deterministic shift t_proc + t_min plus two independent uniform
// delays, camera sampling U(0, 1/f_cam) and display refresh U(0, 1/f_dis).
// Their convolution is an isosceles trapezoid (a triangle if the two
// periods match).
//
// An infinite rate describes an ideal component with zero-width delay.
struct TrapezoidModel {
  double t_proc = 0.0;
  double t_min = 0.0;
  double f_cam = 50.0;
  double f_dis = 60.0;

  void validate() const;

  double cam_period() const { return 1.0 / f_cam; }
  double dis_period() const { return 1.0 / f_dis; }
  double lower() const { return t_proc + t_min; }
  double upper() const { return lower() + cam_period() + dis_period(); }
};

struct DelaySummary {
  double min_s = 0.0;
  double mean_s = 0.0;
  double max_s = 0.0;
  double std_s = 0.0;
};

// Density in 1/s. Zero outside the support. When both periods are zero the
// distribution is a point mass and the density is +inf at the point.
// Throws DataError for non-finite t.
double pdf(const TrapezoidModel& m, double t);

double cdf(const TrapezoidModel& m, double t);

DelaySummary stats(const TrapezoidModel& m);

// t_proc + U(t_min, t_min + 1/f_cam) + U(0, 1/f_dis).
double sample_delay(const TrapezoidModel& m, Rng& rng);

}  // namespace g2g
