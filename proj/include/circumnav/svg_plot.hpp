#pragma once
// Minimal deterministic SVG charts of a run's telemetry.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "circumnav/sim.hpp"

namespace circumnav {

/// Agent paths, targets, their hull and the true minimum circle.
std::string plot_trajectory(const Simulator& sim, std::span<const TelemetryRecord> records);
/// rho - r_t per agent against the setpoint d_i.
std::string plot_distance(const Simulator& sim, std::span<const TelemetryRecord> records);
/// Tangential speed per agent against its expected steady value.
std::string plot_speed(const Simulator& sim, std::span<const TelemetryRecord> records);
/// rho_tilde for every agent/target pair.
std::string plot_errors(const Simulator& sim, std::span<const TelemetryRecord> records);
/// Angular gap per agent against 2pi/n.
std::string plot_gaps(const Simulator& sim, std::span<const TelemetryRecord> records);

/// Writes the five charts into dir; returns the written paths.
std::vector<std::filesystem::path> write_plots(const std::filesystem::path& dir, const Simulator& sim,
                                               std::span<const TelemetryRecord> records);

}  // namespace circumnav
