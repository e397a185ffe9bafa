#pragma once
// Telemetry CSV and invariant-report JSON writers. Column and field tables
// live in docs/file_formats.md.

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "circumnav/scenario.hpp"
#include "circumnav/sim.hpp"

namespace circumnav {

/// Header of the telemetry CSV for this scenario's agent/target counts.
std::vector<std::string> telemetry_columns(const Scenario& scenario);

/// One header row plus one row per record; floats use 9 significant digits.
void write_telemetry_csv(std::ostream& out, const Scenario& scenario, std::span<const TelemetryRecord> records);

/// report.json body. Non-finite numbers are written as null.
std::string report_to_json(const InvariantReport& report, const Scenario& scenario);

}  // namespace circumnav
