#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "g2g/signal.hpp"
#include "g2g/sim.hpp"

namespace g2g {

// Device line protocol, one ASCII record per line:
//
//   H,<rate_hz>,<bits>   exactly once, before any other record
//   S,<tick>,<level>     one ADC sample; ticks are consecutive sample indices
//   E,<tick>             LED switched on at sample tick <tick>
//
// S and E records may interleave. Ticks strictly increase within each kind.
// Blank lines and trailing '\r' are ignored.
struct DeviceCapture {
  SampleStream stream;
  std::vector<std::int64_t> event_ticks;

  std::vector<double> event_times_s() const;

  friend bool operator==(const DeviceCapture&, const DeviceCapture&) = default;
};

// Throws ParseError with the offending line number. Reasons include
// "no header", "tick order", "tick gap", "level range" and "malformed".
DeviceCapture parse_device_stream(std::istream& in);
DeviceCapture parse_device_stream(std::string_view text);

// Sample ticks are written as round(t0 * rate) + index, so a stream with
// t0 = 0 starts at tick 0.
void write_device_stream(std::ostream& out, const SampleStream& stream,
                         std::span<const std::int64_t> event_ticks);
std::string write_device_stream(const SampleStream& stream,
                                std::span<const std::int64_t> event_ticks);

// CSV columns led_on_ms,true_delay_ms,measured_delay_ms with microsecond
// resolution. Missing values are empty fields.
void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records);
std::string write_records_csv(std::span<const MeasurementRecord> records);
std::vector<MeasurementRecord> read_records_csv(std::istream& in);
std::vector<MeasurementRecord> read_records_csv(std::string_view text);

// Rounds a time in seconds to the CSV resolution (1 us).
double round_to_microseconds(double seconds);

// One record per LED event; the detector may only trigger between the event
// tick and the next event tick. Records carry no ground truth.
std::vector<MeasurementRecord> split_trials(const SampleStream& stream,
                                            std::span<const std::int64_t> event_ticks,
                                            const DetectorConfig& cfg);

}  // namespace g2g
