#include "g2g/report.hpp"

#include <cmath>
#include <cstdio>

namespace g2g {

namespace {

// Milliseconds, rounded to the nanosecond so the JSON text stays short.
double ms(double seconds) { return std::round(seconds * 1e9) / 1e6; }

std::string fixed1(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", seconds * 1e3);
  return buf;
}

}  // namespace

std::vector<double> measured_delays(std::span<const MeasurementRecord> records) {
  std::vector<double> delays;
  delays.reserve(records.size());
  for (const auto& r : records) {
    if (r.measured_delay_s) delays.push_back(*r.measured_delay_s);
  }
  return delays;
}

Report make_report(std::span<const double> delays, std::optional<TrapezoidModel> theory) {
  Report r;
  r.n = delays.size();
  if (delays.size() >= 2) r.stats = compute_stats(delays);
  r.theory = theory;
  return r;
}

nlohmann::ordered_json report_json(const Report& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  if (report.stats) {
    const auto& s = *report.stats;
    j["min_ms"] = ms(s.min_s);
    j["mean_ms"] = ms(s.mean_s);
    j["max_ms"] = ms(s.max_s);
    j["std_ms"] = ms(s.std_s);
    j["ci95_ms"] = {ms(s.ci95_lo_s), ms(s.ci95_hi_s)};
    j["width_ms"] = ms(s.width_s);
  } else {
    for (const char* key : {"min_ms", "mean_ms", "max_ms", "std_ms", "ci95_ms", "width_ms"}) {
      j[key] = nullptr;
    }
  }
  if (report.theory) {
    const auto t = g2g::stats(*report.theory);
    j["theory"] = {{"min_ms", ms(t.min_s)},
                   {"mean_ms", ms(t.mean_s)},
                   {"max_ms", ms(t.max_s)},
                   {"width_ms", ms(t.max_s - t.min_s)}};
  } else {
    j["theory"] = nullptr;
  }
  if (report.theory && report.stats) {
    const auto t = g2g::stats(*report.theory);
    j["shrinkage_ms"] = ms((t.max_s - t.min_s) - report.stats->width_s);
  } else {
    j["shrinkage_ms"] = nullptr;
  }
  return j;
}

std::string report_text(const Report& report) {
  std::string out;
  auto row = [&](const char* label, const std::string& value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-18s %s\n", label, value.c_str());
    out += buf;
  };
  row("measurements", std::to_string(report.n));
  if (report.stats) {
    const auto& s = *report.stats;
    row("min/mean/max ms", fixed1(s.min_s) + " / " + fixed1(s.mean_s) + " / " + fixed1(s.max_s));
    row("std ms", fixed1(s.std_s));
    row("mean 95% CI ms", fixed1(s.ci95_lo_s) + " .. " + fixed1(s.ci95_hi_s));
    row("width ms", fixed1(s.width_s));
  } else {
    row("statistics", "need at least two detected delays");
  }
  if (report.theory) {
    const auto t = g2g::stats(*report.theory);
    row("model min/mean/max", fixed1(t.min_s) + " / " + fixed1(t.mean_s) + " / " + fixed1(t.max_s));
    row("model width ms", fixed1(t.max_s - t.min_s));
    if (report.stats) row("shrinkage ms", fixed1((t.max_s - t.min_s) - report.stats->width_s));
  }
  return out;
}

}  // namespace g2g
