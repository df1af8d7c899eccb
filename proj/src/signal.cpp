#include "g2g/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>

#include "g2g/error.hpp"

namespace g2g {

void SampleStream::validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw ConfigError("sample rate must be positive and finite");
  }
  if (resolution_levels < 1) {
    throw ConfigError("resolution must have at least one level");
  }
  if (!std::isfinite(t0)) throw ConfigError("t0 must be finite");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < 0 || samples[i] >= resolution_levels) {
      throw ConfigError("sample " + std::to_string(i) + " out of range: " +
                        std::to_string(samples[i]));
    }
  }
}

void DetectorConfig::validate() const {
  if (slope_threshold <= 0) throw ConfigError("slope_threshold must be > 0");
  if (slope_window < 1) throw ConfigError("slope_window must be >= 1");
  if (single_step_threshold <= 0) {
    throw ConfigError("single_step_threshold must be > 0");
  }
}

SampleStream max_filter(const SampleStream& stream, std::size_t k) {
  if (stream.samples.empty()) throw DataError("empty input");

  SampleStream out = stream;
  const auto& a = stream.samples;
  auto& b = out.samples;
  // Indices into `a` with strictly decreasing values; front is the window max.
  std::deque<std::size_t> window;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (!window.empty() && a[window.back()] <= a[i]) window.pop_back();
    window.push_back(i);
    if (i >= k + 1 && window.front() < i - k) window.pop_front();
    b[i] = a[window.front()];
  }
  return out;
}

std::optional<EdgeDetection> detect_rising_edge(const SampleStream& filtered,
                                                const DetectorConfig& cfg,
                                                std::size_t first_index) {
  cfg.validate();
  const auto& b = filtered.samples;
  for (std::size_t i = std::max<std::size_t>(first_index, 1); i < b.size(); ++i) {
    const bool single = b[i] - b[i - 1] >= cfg.single_step_threshold;
    const bool window =
        i >= cfg.slope_window && b[i] - b[i - cfg.slope_window] >= cfg.slope_threshold;
    if (single || window) return EdgeDetection{i, filtered.time_of(i)};
  }
  return std::nullopt;
}

std::optional<EdgeDetection> detect_event(const SampleStream& stream,
                                          const DetectorConfig& cfg) {
  return detect_event_in_range(stream, cfg, 0, stream.samples.size());
}

std::optional<EdgeDetection> detect_event_in_range(const SampleStream& stream,
                                                   const DetectorConfig& cfg,
                                                   std::size_t begin,
                                                   std::size_t end) {
  cfg.validate();
  end = std::min(end, stream.samples.size());
  begin = std::max(begin, cfg.max_filter_len_k);
  if (begin >= end) {
    if (stream.samples.empty()) throw DataError("empty input");
    return std::nullopt;
  }

  // b[j] only depends on a[j - k .. j], so filtering from `offset` reproduces
  // the full-history values for every index the scan below can reference.
  const std::size_t reach = cfg.max_filter_len_k + cfg.slope_window;
  const std::size_t offset = begin > reach ? begin - reach : 0;
  SampleStream slice;
  slice.rate_hz = stream.rate_hz;
  slice.resolution_levels = stream.resolution_levels;
  slice.t0 = stream.t0;
  slice.samples.assign(stream.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                       stream.samples.begin() + static_cast<std::ptrdiff_t>(end));
  auto hit = detect_rising_edge(max_filter(slice, cfg.max_filter_len_k), cfg,
                                begin - offset);
  if (!hit) return std::nullopt;
  hit->trigger_index += offset;
  hit->trigger_time_s = stream.time_of(hit->trigger_index);
  return hit;
}

}  // namespace g2g
