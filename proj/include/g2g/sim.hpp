#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "g2g/model.hpp"
#include "g2g/signal.hpp"

namespace g2g {

// The system under test plus the measurement front end, all in seconds/Hz.
//
// Camera frame periods end at cam_phase + n / f_cam. An LED that turns on at
// least t_min before a frame-period end is captured by that frame, which is
// read out at the period end. After t_proc (plus optional Gaussian jitter,
// truncated at zero) the frame is in the graphics buffer and becomes visible
// at the next display refresh tick dis_phase + m / f_dis (a tick coinciding
// with the buffer time counts).
struct PipelineModel {
  double f_cam = 50.0;
  double exposure_s = 0.02;
  double t_min = 0.0;
  double t_proc = 0.0191;
  double proc_jitter_std = 0.0;
  double f_dis = 60.0;
  double cam_phase = 0.0;
  double dis_phase = 0.0;

  double pwm_freq_hz = 0.0;
  Level pwm_depth_levels = 0;
  Level led_on_level = 400;
  Level led_off_level = 100;
  double noise_std_levels = 0.0;

  double sample_rate_hz = 2000.0;
  int adc_bits = 10;

  void validate() const;

  TrapezoidModel trapezoid() const { return {t_proc, t_min, f_cam, f_dis}; }
  // Upper bound on a single delay, including a 6 sigma jitter allowance.
  double worst_case_delay() const;
};

struct MeasurementRecord {
  double led_on_time_s = 0.0;
  std::optional<double> true_display_time_s;
  std::optional<double> detected_time_s;
  std::optional<double> measured_delay_s;
  std::optional<double> true_delay_s;

  bool detected() const { return measured_delay_s.has_value(); }

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

enum class IntervalMode { kConstant, kRandom };

struct CampaignConfig {
  int n_measurements = 250;
  IntervalMode interval_mode = IntervalMode::kRandom;
  // Spacing between consecutive LED turn-on instants.
  double interval_base_s = 1.0;
  // Half-width of the uniform jitter added in random mode.
  double interval_spread_s = 0.25;
  // How long the LED stays lit in each trial; only shapes rendered captures.
  double led_hold_s = 0.2;
  DetectorConfig detector;
  std::uint64_t seed = 1;

  double min_interval() const {
    return interval_mode == IntervalMode::kRandom ? interval_base_s - interval_spread_s
                                                  : interval_base_s;
  }

  // Throws ConfigError when trials could overlap for this pipeline.
  void validate(const PipelineModel& p) const;
};

// Each trial stream starts this long before the LED turns on and ends this
// long after the panel lights up.
inline constexpr double kTrialPreRoll = 0.050;
inline constexpr double kTrialPostRoll = 0.050;

// First instant the panel shows the lit LED, for an LED switched on at
// led_on_time_s, with the processing delay fixed to p.t_proc.
double true_display_time(const PipelineModel& p, double led_on_time_s);

double true_delay(const PipelineModel& p, double led_on_time_s);

// Panel brightness at time t (before noise and quantization) given whether the
// panel shows the lit LED at that moment.
double panel_level(const PipelineModel& p, bool lit, double t);

// Renders the phototransistor stream around one LED event and runs the
// detector on it from the LED turn-on sample onwards.
std::pair<SampleStream, MeasurementRecord> simulate_trial(
    const PipelineModel& p, double led_on_time_s, Rng& rng,
    const DetectorConfig& detector = {});

using TrialSink = std::function<void(const SampleStream&, const MeasurementRecord&)>;

// Runs n_measurements trials on free-running camera/display clocks. LED i
// turns on interval_i after LED i-1 (the first one interval_0 after t = 0).
std::vector<MeasurementRecord> run_campaign(const PipelineModel& p,
                                            const CampaignConfig& c,
                                            const TrialSink& sink = {});

// What a measurement device would have captured over a whole campaign: one
// continuous stream from t = 0 and the sample ticks at which each LED turned
// on (first sample at or after the turn-on instant).
struct CampaignCapture {
  std::vector<MeasurementRecord> records;
  SampleStream stream;
  std::vector<std::int64_t> event_ticks;
};

// Inside every trial window the capture is sample-for-sample the trial
// stream; between windows the LED turns off after led_hold_s and the panel
// goes dark again with its own pipeline delay.
CampaignCapture render_capture(const PipelineModel& p, const CampaignConfig& c);

}  // namespace g2g
