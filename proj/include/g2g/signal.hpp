#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace g2g {

// Quantized brightness level as read from the phototransistor ADC.
using Level = std::int32_t;

// Raw phototransistor samples at a fixed rate. Sample i was taken at
// t0 + i / rate_hz (absolute seconds).
struct SampleStream {
  double rate_hz = 2000.0;
  Level resolution_levels = 1024;
  std::vector<Level> samples;
  double t0 = 0.0;

  double time_of(std::size_t index) const {
    return t0 + static_cast<double>(index) / rate_hz;
  }

  // Throws ConfigError if the rate or any sample is out of range.
  void validate() const;

  friend bool operator==(const SampleStream&, const SampleStream&) = default;
};

struct DetectorConfig {
  // The maximum filter looks at the current sample and the k previous ones.
  // 12 samples at 2 kHz spans one period of a 180 Hz backlight PWM.
  std::size_t max_filter_len_k = 12;
  // Cumulative increase over `slope_window` sample intervals that triggers.
  Level slope_threshold = 20;
  std::size_t slope_window = 3;
  // Increase from one sample to the next that triggers on its own.
  Level single_step_threshold = 20;

  void validate() const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct EdgeDetection {
  std::size_t trigger_index = 0;
  double trigger_time_s = 0.0;

  friend bool operator==(const EdgeDetection&, const EdgeDetection&) = default;
};

// b[i] = max(a[max(0, i - k)] .. a[i]). Runs in O(n) with a monotone deque.
// Throws DataError("empty input") on an empty stream.
SampleStream max_filter(const SampleStream& stream, std::size_t k);

// Slope-threshold rising edge detection on an already max-filtered stream.
// Returns the first index i >= first_index with
//   b[i] - b[i - slope_window] >= slope_threshold   (i >= slope_window), or
//   b[i] - b[i - 1]            >= single_step_threshold (i >= 1).
std::optional<EdgeDetection> detect_rising_edge(const SampleStream& filtered,
                                                const DetectorConfig& cfg,
                                                std::size_t first_index = 0);

// Maximum filter followed by edge detection. The detector arms once the
// filter window is full: indices below max_filter_len_k are never reported,
// so a stream that starts inside a PWM dark phase does not trigger while the
// filter fills. For k = 0 this is exactly detect_rising_edge(max_filter(s, 0)).
std::optional<EdgeDetection> detect_event(const SampleStream& stream,
                                          const DetectorConfig& cfg);

// Same as detect_event, but only indices in [begin, end) may trigger. The
// filter still sees all samples before `begin`, the way a free-running
// device filter would. `end` is clamped to the stream length.
std::optional<EdgeDetection> detect_event_in_range(const SampleStream& stream,
                                                   const DetectorConfig& cfg,
                                                   std::size_t begin,
                                                   std::size_t end);

}  // namespace g2g
