#pragma once
/**
 * @file scenario.hpp
 * @brief Scenario description and loader.
 *
 * Scenarios are YAML documents (see docs/file_formats.md). Loading validates
 * structure and ranges (hard errors, Errc::ParseError with line and field)
 * and then checks the standing assumptions of the algorithm:
 *
 *   A1  r_s <= D(0)                   agent starts outside the safety shell
 *   A2  h < r_s < d                   for every agent's d
 *   A3  h <= rho_hat_i(0) <= rho_i(0) every compensator starts as an underestimate
 *
 * Assumption violations never abort loading. They are collected in
 * `warnings` and mark the scenario as non-certified.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circumnav/controller.hpp"
#include "circumnav/estimator.hpp"
#include "circumnav/geometry.hpp"
#include "circumnav/multiagent.hpp"

namespace circumnav {

enum class Integrator { Euler, RK4 };

struct AgentConfig {
  Vec2 initial_position;
  std::vector<double> initial_rho_hats;  ///< one per target
  double d{0.4};
};

struct Scenario {
  std::string name{"scenario"};
  std::vector<Vec2> targets;
  std::vector<AgentConfig> agents;
  ControlParams control;  ///< control.d is the default for agents without their own d
  EstimatorParams estimator;
  FormationParams formation{std::numeric_limits<double>::infinity(), GainFunction::exponential(), {},
                            RadiusScaling::Normalized};
  double dt{1e-3};
  double t_end{30.0};
  Integrator integrator{Integrator::RK4};
  std::size_t log_stride{10};
  std::uint64_t seed{0};

  std::vector<std::string> warnings;  ///< assumption violations found at load time

  [[nodiscard]] bool certified() const { return warnings.empty(); }
};

/// Parses a scenario document. Each override is "dotted.key=value" and must
/// name a key already present in the document (list entries by index, e.g.
/// "agents.1.d=0.8").
Scenario load_scenario(std::string_view document, std::span<const std::string> overrides = {});
Scenario load_scenario_file(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Range/shape validation shared by the loader and programmatic construction.
/// Throws Errc::InvalidArgument.
void validate(const Scenario& scenario);

/// Returns one human-readable line per violated assumption.
std::vector<std::string> check_assumptions(const Scenario& scenario);

std::string_view to_string(Integrator integrator);
std::string_view to_string(BearingRateMode mode);
std::string_view to_string(RadiusScaling scaling);

}  // namespace circumnav
