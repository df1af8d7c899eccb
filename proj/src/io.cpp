#include "g2g/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>

#include "g2g/error.hpp"

namespace g2g {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string format_ms(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", seconds * 1000.0);
  return buf;
}

double parse_ms(std::string_view field, std::string_view column, std::size_t line) {
  auto v = parse_number<double>(field);
  if (!v || !std::isfinite(*v)) {
    throw ParseError("bad value in column " + std::string(column), line);
  }
  return *v / 1000.0;
}

constexpr std::string_view kCsvColumns[] = {"led_on_ms", "true_delay_ms", "measured_delay_ms"};

}  // namespace

std::vector<double> DeviceCapture::event_times_s() const {
  std::vector<double> times;
  times.reserve(event_ticks.size());
  for (auto tick : event_ticks) times.push_back(static_cast<double>(tick) / stream.rate_hz);
  return times;
}

DeviceCapture parse_device_stream(std::istream& in) {
  DeviceCapture capture;
  bool have_header = false;
  std::optional<std::int64_t> first_tick;
  std::optional<std::int64_t> last_sample_tick;
  std::optional<std::int64_t> last_event_tick;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim_cr(raw);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    const std::string_view kind = f[0];

    if (kind == "H") {
      if (have_header) throw ParseError("duplicate header", line_no);
      if (f.size() != 3) throw ParseError("malformed", line_no);
      auto rate = parse_number<double>(f[1]);
      auto bits = parse_number<int>(f[2]);
      if (!rate || !bits) throw ParseError("malformed", line_no);
      if (!(*rate > 0.0) || !std::isfinite(*rate)) throw ParseError("rate range", line_no);
      if (*bits < 1 || *bits > 16) throw ParseError("bits range", line_no);
      capture.stream.rate_hz = *rate;
      capture.stream.resolution_levels = Level{1} << *bits;
      have_header = true;
      continue;
    }
    if (kind != "S" && kind != "E") throw ParseError("malformed", line_no);
    if (!have_header) throw ParseError("no header", line_no);

    if (kind == "S") {
      if (f.size() != 3) throw ParseError("malformed", line_no);
      auto tick = parse_number<std::int64_t>(f[1]);
      auto level = parse_number<Level>(f[2]);
      if (!tick || !level) throw ParseError("malformed", line_no);
      if (last_sample_tick) {
        if (*tick <= *last_sample_tick) throw ParseError("tick order", line_no);
        if (*tick - *last_sample_tick != 1) throw ParseError("tick gap", line_no);
      } else {
        first_tick = *tick;
      }
      if (*level < 0 || *level >= capture.stream.resolution_levels) {
        throw ParseError("level range", line_no);
      }
      last_sample_tick = *tick;
      capture.stream.samples.push_back(*level);
    } else {
      if (f.size() != 2) throw ParseError("malformed", line_no);
      auto tick = parse_number<std::int64_t>(f[1]);
      if (!tick) throw ParseError("malformed", line_no);
      if (last_event_tick && *tick <= *last_event_tick) throw ParseError("tick order", line_no);
      last_event_tick = *tick;
      capture.event_ticks.push_back(*tick);
    }
  }
  if (!have_header) throw ParseError("no header", 0);
  capture.stream.t0 =
      first_tick ? static_cast<double>(*first_tick) / capture.stream.rate_hz : 0.0;
  return capture;
}

DeviceCapture parse_device_stream(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_device_stream(in);
}

void write_device_stream(std::ostream& out, const SampleStream& stream,
                         std::span<const std::int64_t> event_ticks) {
  const int bits = static_cast<int>(std::lround(std::log2(stream.resolution_levels)));
  if ((Level{1} << bits) != stream.resolution_levels) {
    throw ConfigError("resolution must be a power of two for the device protocol");
  }
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.17g", stream.rate_hz);
  out << "H," << rate << ',' << bits << '\n';

  const auto first = static_cast<std::int64_t>(std::llround(stream.t0 * stream.rate_hz));
  std::size_t e = 0;
  for (std::size_t i = 0; i < stream.samples.size(); ++i) {
    const std::int64_t tick = first + static_cast<std::int64_t>(i);
    for (; e < event_ticks.size() && event_ticks[e] <= tick; ++e) {
      out << "E," << event_ticks[e] << '\n';
    }
    out << "S," << tick << ',' << stream.samples[i] << '\n';
  }
  for (; e < event_ticks.size(); ++e) out << "E," << event_ticks[e] << '\n';
}

std::string write_device_stream(const SampleStream& stream,
                                std::span<const std::int64_t> event_ticks) {
  std::ostringstream out;
  write_device_stream(out, stream, event_ticks);
  return out.str();
}

void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records) {
  out << kCsvColumns[0] << ',' << kCsvColumns[1] << ',' << kCsvColumns[2] << '\n';
  for (const auto& r : records) {
    out << format_ms(r.led_on_time_s) << ',';
    if (r.true_delay_s) out << format_ms(*r.true_delay_s);
    out << ',';
    if (r.measured_delay_s) out << format_ms(*r.measured_delay_s);
    out << '\n';
  }
}

std::string write_records_csv(std::span<const MeasurementRecord> records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

std::vector<MeasurementRecord> read_records_csv(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw)) throw ParseError("missing header row", 0);
  const auto header = split(trim_cr(raw), ',');
  for (std::size_t c = 0; c < std::size(kCsvColumns); ++c) {
    if (c >= header.size()) throw ParseError("missing column " + std::string(kCsvColumns[c]), 1);
    if (header[c] != kCsvColumns[c]) {
      throw ParseError("unexpected column " + std::string(header[c]) + " (expected " +
                           std::string(kCsvColumns[c]) + ")",
                       1);
    }
  }
  if (header.size() > std::size(kCsvColumns)) {
    throw ParseError("unexpected column " + std::string(header[std::size(kCsvColumns)]), 1);
  }

  std::vector<MeasurementRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim_cr(raw);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != std::size(kCsvColumns)) throw ParseError("wrong field count", line_no);
    MeasurementRecord r;
    r.led_on_time_s = parse_ms(f[0], kCsvColumns[0], line_no);
    if (!f[1].empty()) {
      r.true_delay_s = parse_ms(f[1], kCsvColumns[1], line_no);
      r.true_display_time_s = r.led_on_time_s + *r.true_delay_s;
    }
    if (!f[2].empty()) {
      r.measured_delay_s = parse_ms(f[2], kCsvColumns[2], line_no);
      r.detected_time_s = r.led_on_time_s + *r.measured_delay_s;
    }
    records.push_back(r);
  }
  return records;
}

std::vector<MeasurementRecord> read_records_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_records_csv(in);
}

double round_to_microseconds(double seconds) {
  // Same text path as the CSV writer and reader, so values agree bit-for-bit.
  return *parse_number<double>(format_ms(seconds)) / 1000.0;
}

std::vector<MeasurementRecord> split_trials(const SampleStream& stream,
                                            std::span<const std::int64_t> event_ticks,
                                            const DetectorConfig& cfg) {
  cfg.validate();
  const auto first = static_cast<std::int64_t>(std::llround(stream.t0 * stream.rate_hz));
  const auto n = static_cast<std::int64_t>(stream.samples.size());
  auto to_index = [&](std::int64_t tick) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(tick - first, 0, n));
  };

  std::vector<MeasurementRecord> records;
  records.reserve(event_ticks.size());
  for (std::size_t e = 0; e < event_ticks.size(); ++e) {
    MeasurementRecord r;
    r.led_on_time_s = static_cast<double>(event_ticks[e]) / stream.rate_hz;
    const std::size_t begin = to_index(event_ticks[e]);
    const std::size_t end =
        e + 1 < event_ticks.size() ? to_index(event_ticks[e + 1]) : stream.samples.size();
    if (!stream.samples.empty()) {
      if (auto hit = detect_event_in_range(stream, cfg, begin, end)) {
        r.detected_time_s = hit->trigger_time_s;
        r.measured_delay_s = hit->trigger_time_s - r.led_on_time_s;
      }
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace g2g
