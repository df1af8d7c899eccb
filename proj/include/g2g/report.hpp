#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "g2g/model.hpp"
#include "g2g/sim.hpp"
#include "g2g/stats.hpp"

namespace g2g {

// Campaign report. `stats` is absent when fewer than two delays were
// detected; `theory` is absent when no model is known.
struct Report {
  std::size_t n = 0;
  std::optional<DelayStats> stats;
  std::optional<TrapezoidModel> theory;
};

// Detected (measured) delays of the records, in record order.
std::vector<double> measured_delays(std::span<const MeasurementRecord> records);

Report make_report(std::span<const double> delays, std::optional<TrapezoidModel> theory);

// {n, min_ms, mean_ms, max_ms, std_ms, ci95_ms: [lo, hi], width_ms,
//  theory: {min_ms, mean_ms, max_ms, width_ms}, shrinkage_ms}
nlohmann::ordered_json report_json(const Report& report);

// Aligned human-readable summary, 0.1 ms granularity.
std::string report_text(const Report& report);

}  // namespace g2g
