#include "g2g/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "g2g/error.hpp"

namespace g2g {

namespace {

struct Shape {
  double a;     // left edge of the support
  double w_lo;  // shorter of the two uniform widths
  double w_hi;  // longer one
  double total() const { return w_lo + w_hi; }
};

Shape shape_of(const TrapezoidModel& m) {
  m.validate();
  const double w1 = m.cam_period();
  const double w2 = m.dis_period();
  return {m.lower(), std::min(w1, w2), std::max(w1, w2)};
}

void require_finite(double t) {
  if (!std::isfinite(t)) throw DataError("time must be finite");
}

}  // namespace

void TrapezoidModel::validate() const {
  if (!(t_proc >= 0.0) || !std::isfinite(t_proc)) {
    throw ConfigError("t_proc must be finite and >= 0");
  }
  if (!(t_min >= 0.0) || !std::isfinite(t_min)) {
    throw ConfigError("t_min must be finite and >= 0");
  }
  if (!(f_cam > 0.0)) throw ConfigError("f_cam must be > 0");
  if (!(f_dis > 0.0)) throw ConfigError("f_dis must be > 0");
}

double pdf(const TrapezoidModel& m, double t) {
  require_finite(t);
  const Shape s = shape_of(m);
  const double x = t - s.a;
  if (x < 0.0 || x > s.total()) return 0.0;
  if (s.w_hi == 0.0) return std::numeric_limits<double>::infinity();
  if (x < s.w_lo) return x / (s.w_lo * s.w_hi);
  if (x <= s.w_hi) return 1.0 / s.w_hi;
  return (s.total() - x) / (s.w_lo * s.w_hi);
}

double cdf(const TrapezoidModel& m, double t) {
  require_finite(t);
  const Shape s = shape_of(m);
  const double x = t - s.a;
  if (x < 0.0) return 0.0;
  if (x >= s.total()) return 1.0;
  // x is inside a non-degenerate support from here on, so w_hi > 0.
  if (x < s.w_lo) return x * x / (2.0 * s.w_lo * s.w_hi);
  if (x <= s.w_hi) return (x - 0.5 * s.w_lo) / s.w_hi;
  const double r = s.total() - x;
  return 1.0 - r * r / (2.0 * s.w_lo * s.w_hi);
}

DelaySummary stats(const TrapezoidModel& m) {
  m.validate();
  const double w1 = m.cam_period();
  const double w2 = m.dis_period();
  return {m.lower(), m.lower() + 0.5 * (w1 + w2), m.upper(),
          std::sqrt((w1 * w1 + w2 * w2) / 12.0)};
}

double sample_delay(const TrapezoidModel& m, Rng& rng) {
  m.validate();
  // generate_canonical lies in [0, 1); scaling keeps zero widths exact.
  const double u_cam = std::generate_canonical<double, 53>(rng);
  const double u_dis = std::generate_canonical<double, 53>(rng);
  return m.t_proc + m.t_min + u_cam * m.cam_period() + u_dis * m.dis_period();
}

}  // namespace g2g
