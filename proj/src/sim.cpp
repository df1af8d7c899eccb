#include "g2g/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "g2g/error.hpp"

namespace g2g {

namespace {

// Clock ticks closer than this (in units of one period) to the query time
// count as coincident, so exact boundaries survive floating-point rounding.
constexpr double kTickTolerance = 1e-9;

// First tick phase + n / rate that is >= t.
double next_tick(double t, double phase, double rate) {
  const double n = std::ceil((t - phase) * rate - kTickTolerance);
  return phase + n / rate;
}

double display_time_with(const PipelineModel& p, double led_on_time_s,
                         double proc_delay) {
  const double readout = next_tick(led_on_time_s + p.t_min, p.cam_phase, p.f_cam);
  return next_tick(readout + proc_delay, p.dis_phase, p.f_dis);
}

double draw_proc_delay(const PipelineModel& p, Rng& rng) {
  if (p.proc_jitter_std <= 0.0) return p.t_proc;
  std::normal_distribution<double> jitter(p.t_proc, p.proc_jitter_std);
  for (;;) {
    const double d = jitter(rng);
    if (d >= 0.0) return d;
  }
}

Level quantize(const PipelineModel& p, double level) {
  const double top = std::ldexp(1.0, p.adc_bits) - 1.0;
  return static_cast<Level>(std::clamp(std::round(level), 0.0, top));
}

}  // namespace

void PipelineModel::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!positive(f_cam)) throw ConfigError("f_cam must be positive and finite");
  if (!positive(f_dis)) throw ConfigError("f_dis must be positive and finite");
  const double frame = 1.0 / f_cam;
  if (!positive(exposure_s) || exposure_s > frame * (1.0 + 1e-12)) {
    throw ConfigError("exposure_s must lie in (0, 1/f_cam]");
  }
  if (!non_negative(t_min)) throw ConfigError("t_min must be >= 0");
  if (t_min < frame - exposure_s - 1e-12) {
    throw ConfigError("t_min must cover the unexposed tail 1/f_cam - exposure_s");
  }
  if (!non_negative(t_proc)) throw ConfigError("t_proc must be >= 0");
  if (!non_negative(proc_jitter_std)) throw ConfigError("proc_jitter_std must be >= 0");
  if (!(cam_phase >= 0.0 && cam_phase < frame)) {
    throw ConfigError("cam_phase must lie in [0, 1/f_cam)");
  }
  if (!(dis_phase >= 0.0 && dis_phase < 1.0 / f_dis)) {
    throw ConfigError("dis_phase must lie in [0, 1/f_dis)");
  }
  if (!non_negative(pwm_freq_hz)) throw ConfigError("pwm_freq_hz must be >= 0");
  if (pwm_depth_levels < 0) throw ConfigError("pwm_depth_levels must be >= 0");
  if (!(led_on_level > led_off_level)) {
    throw ConfigError("led_on_level must exceed led_off_level");
  }
  if (!non_negative(noise_std_levels)) throw ConfigError("noise_std_levels must be >= 0");
  if (!positive(sample_rate_hz)) throw ConfigError("sample_rate_hz must be > 0");
  if (adc_bits < 1 || adc_bits > 16) throw ConfigError("adc_bits must be in [1, 16]");
}

double PipelineModel::worst_case_delay() const {
  return t_proc + 6.0 * proc_jitter_std + t_min + 1.0 / f_cam + 1.0 / f_dis;
}

void CampaignConfig::validate(const PipelineModel& p) const {
  p.validate();
  detector.validate();
  if (n_measurements < 1) throw ConfigError("n_measurements must be >= 1");
  if (!(interval_base_s > 0.0) || !std::isfinite(interval_base_s)) {
    throw ConfigError("interval_base_s must be > 0");
  }
  if (interval_mode == IntervalMode::kRandom &&
      (!(interval_spread_s >= 0.0) || interval_spread_s >= interval_base_s)) {
    throw ConfigError("interval_spread_s must lie in [0, interval_base_s)");
  }
  const double worst = p.worst_case_delay();
  if (!(led_hold_s >= worst + kTrialPostRoll)) {
    throw ConfigError("led_hold_s must cover the worst-case delay plus the trial post-roll");
  }
  if (!(min_interval() > led_hold_s + worst + kTrialPreRoll)) {
    throw ConfigError(
        "interval too small: consecutive trials overlap (need > led_hold_s + "
        "worst-case delay + pre-roll)");
  }
}

double true_display_time(const PipelineModel& p, double led_on_time_s) {
  return display_time_with(p, led_on_time_s, p.t_proc);
}

double true_delay(const PipelineModel& p, double led_on_time_s) {
  return true_display_time(p, led_on_time_s) - led_on_time_s;
}

double panel_level(const PipelineModel& p, bool lit, double t) {
  double level = lit ? p.led_on_level : p.led_off_level;
  if (p.pwm_freq_hz > 0.0) {
    const double cycles = t * p.pwm_freq_hz;
    // Backlight off during the second half of each PWM period.
    if (cycles - std::floor(cycles) >= 0.5) level -= p.pwm_depth_levels;
  }
  return level;
}

std::pair<SampleStream, MeasurementRecord> simulate_trial(const PipelineModel& p,
                                                          double led_on_time_s, Rng& rng,
                                                          const DetectorConfig& detector) {
  p.validate();
  detector.validate();
  if (!(led_on_time_s >= 0.0) || !std::isfinite(led_on_time_s)) {
    throw ConfigError("led_on_time_s must be finite and >= 0");
  }

  const double display = display_time_with(p, led_on_time_s, draw_proc_delay(p, rng));
  const double rate = p.sample_rate_hz;
  const auto first = static_cast<std::int64_t>(std::floor((led_on_time_s - kTrialPreRoll) * rate));
  const auto last = static_cast<std::int64_t>(std::ceil((display + kTrialPostRoll) * rate));

  SampleStream stream;
  stream.rate_hz = rate;
  stream.resolution_levels = Level{1} << p.adc_bits;
  stream.t0 = static_cast<double>(first) / rate;
  stream.samples.reserve(static_cast<std::size_t>(last - first + 1));

  std::normal_distribution<double> noise(0.0, p.noise_std_levels);
  std::size_t led_index = 0;
  bool led_index_found = false;
  for (std::int64_t g = first; g <= last; ++g) {
    const double t = static_cast<double>(g) / rate;
    if (!led_index_found && t >= led_on_time_s) {
      led_index = stream.samples.size();
      led_index_found = true;
    }
    double level = panel_level(p, t >= display, t);
    if (p.noise_std_levels > 0.0) level += noise(rng);
    stream.samples.push_back(quantize(p, level));
  }

  MeasurementRecord record;
  record.led_on_time_s = led_on_time_s;
  record.true_display_time_s = display;
  record.true_delay_s = display - led_on_time_s;
  if (auto hit = detect_event_in_range(stream, detector, led_index, stream.samples.size())) {
    record.detected_time_s = hit->trigger_time_s;
    record.measured_delay_s = hit->trigger_time_s - led_on_time_s;
  }
  return {std::move(stream), record};
}

std::vector<MeasurementRecord> run_campaign(const PipelineModel& p, const CampaignConfig& c,
                                            const TrialSink& sink) {
  c.validate(p);
  Rng rng(c.seed);
  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(c.n_measurements));
  double led_on = 0.0;
  for (int i = 0; i < c.n_measurements; ++i) {
    double interval = c.interval_base_s;
    if (c.interval_mode == IntervalMode::kRandom) {
      const double u = std::generate_canonical<double, 53>(rng);
      interval += c.interval_spread_s * (2.0 * u - 1.0);
    }
    led_on += interval;
    auto [stream, record] = simulate_trial(p, led_on, rng, c.detector);
    if (sink) sink(stream, record);
    records.push_back(record);
  }
  return records;
}

CampaignCapture render_capture(const PipelineModel& p, const CampaignConfig& c) {
  struct Window {
    std::int64_t first;
    SampleStream stream;
    double lit_from;
    double lit_until;
  };
  std::vector<Window> windows;
  CampaignCapture capture;
  const double rate = p.sample_rate_hz;
  capture.records = run_campaign(p, c, [&](const SampleStream& s, const MeasurementRecord& r) {
    windows.push_back({static_cast<std::int64_t>(std::llround(s.t0 * rate)), s,
                       *r.true_display_time_s,
                       true_display_time(p, r.led_on_time_s + c.led_hold_s)});
  });

  capture.stream.rate_hz = rate;
  capture.stream.resolution_levels = Level{1} << p.adc_bits;
  capture.stream.t0 = 0.0;
  for (const auto& r : capture.records) {
    capture.event_ticks.push_back(static_cast<std::int64_t>(std::ceil(r.led_on_time_s * rate)));
  }

  const Window& tail = windows.back();
  const std::int64_t end = tail.first + static_cast<std::int64_t>(tail.stream.samples.size());
  capture.stream.samples.reserve(static_cast<std::size_t>(end));

  // Gap samples get their own noise so the trial streams stay untouched.
  Rng rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, p.noise_std_levels);
  std::size_t w = 0;
  for (std::int64_t g = 0; g < end; ++g) {
    while (w < windows.size() &&
           g >= windows[w].first + static_cast<std::int64_t>(windows[w].stream.samples.size())) {
      ++w;
    }
    if (w < windows.size() && g >= windows[w].first) {
      capture.stream.samples.push_back(
          windows[w].stream.samples[static_cast<std::size_t>(g - windows[w].first)]);
      continue;
    }
    const double t = static_cast<double>(g) / rate;
    // Before window w the panel may still show trial w-1 until its LED-off
    // event reaches the display.
    const bool lit = w > 0 && t >= windows[w - 1].lit_from && t < windows[w - 1].lit_until;
    double level = panel_level(p, lit, t);
    if (p.noise_std_levels > 0.0) level += noise(rng);
    capture.stream.samples.push_back(quantize(p, level));
  }
  return capture;
}

}  // namespace g2g
