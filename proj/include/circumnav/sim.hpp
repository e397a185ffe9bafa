#pragma once
/**
 * @file sim.hpp
 * @brief Fixed-step closed-loop simulation of agents, compensators and targets.
 *
 * State integrated per agent: position y (single integrator, ydot = command)
 * and one rho_hat per target. Each derivative evaluation runs the full loop:
 * measure bearings -> bearing rates -> estimated targets -> estimated minimum
 * circle -> velocity command -> compensator rates. With RK4 the loop runs at
 * every stage; step and sign discontinuities are evaluated pointwise.
 *
 * In NumericBackward mode the bearing rate at an evaluation is the backward
 * difference against the most recent earlier sample: the sample from the
 * previous step for the first stage, and the sample at the current step's
 * start for the later stages. The very first evaluation of a run has no
 * history and uses a zero rate.
 *
 * After every step rho_hat is clamped to >= h.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "circumnav/controller.hpp"
#include "circumnav/estimator.hpp"
#include "circumnav/geometry.hpp"
#include "circumnav/multiagent.hpp"
#include "circumnav/scenario.hpp"

namespace circumnav {

struct WorldState {
  double t{0.0};
  std::size_t step_index{0};
  std::vector<Vec2> agent_positions;
  std::vector<std::vector<CompensatorState>> compensators;               ///< [agent][target]
  std::vector<std::vector<std::optional<BearingSample>>> last_bearings;  ///< [agent][target]
};

struct TargetTelemetry {
  double rho{0.0};        ///< true range
  double rho_hat{0.0};
  double rho_tilde{0.0};  ///< rho_hat - rho
  double rho_hat_dot{0.0};
  double v{0.0};          ///< phi^T ydot
  double vbar{0.0};       ///< phibar^T ydot
  double omega{0.0};      ///< vbar / rho
  Vec2 phi;               ///< measured bearing (components)
  Vec2 phi_dot;           ///< bearing rate fed to the compensator
  Vec2 estimate;          ///< y + rho_hat * phi
};

struct AgentTelemetry {
  Vec2 position;
  Vec2 velocity;               ///< commanded velocity
  double hull_distance{0.0};   ///< D(t), distance to the true target hull
  double circle_distance{0.0};  ///< rho(t) - r_t, distance to the true minimum circle
  double tangential_speed{0.0};  ///< phibar^T ydot w.r.t. the true circle center
  Vec2 est_center;
  double est_radius{0.0};
  double rho_hat_c{0.0};
  bool tangential_on{false};
  double gap{0.0};  ///< delta phi (2pi for a single agent)
  double sigma_plus{0.0};
  double sigma_minus{0.0};
  std::vector<TargetTelemetry> targets;
};

struct TelemetryRecord {
  double t{0.0};
  std::size_t step_index{0};
  std::vector<AgentTelemetry> agents;
  double min_agent_distance{0.0};  ///< +inf with a single agent
  double gap_sum{0.0};
};

struct StepResult {
  WorldState world;
  TelemetryRecord record;  ///< observables of the pre-step state
};

struct InvariantCheck {
  std::string name;
  bool passed{true};
  double value{0.0};
  double threshold{0.0};
  std::string detail;
};

struct InvariantReport {
  static constexpr int kSchemaVersion = 1;

  std::string scenario;
  bool certified{true};
  std::vector<std::string> warnings;
  bool completed{true};
  std::optional<std::string> failure;
  double t_final{0.0};
  std::size_t steps{0};

  double min_hull_distance{0.0};
  double max_rho_tilde{0.0};
  double min_floor_margin{0.0};        ///< min rho_hat - h
  double worst_monotone_drop{0.0};     ///< largest decrease of rho_tilde between checks, minus its tolerance
  double final_distance_error{0.0};    ///< max_i |rho_i - r_t - d_i| at t_final
  double final_speed_error{0.0};       ///< max_i |tangential speed - expected| at t_final
  double final_max_abs_rho_tilde{0.0};
  std::optional<double> t_conv;        ///< first time after which max |rho_tilde| < 1e-2 for good
  double final_gap_spread{0.0};        ///< max_i |delta phi_i - 2pi/n| at t_final
  double max_gap_sum_error{0.0};
  double min_agent_distance{0.0};

  std::vector<InvariantCheck> checks;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] const InvariantCheck* find(std::string_view name) const;
};

struct RunResult {
  std::vector<TelemetryRecord> telemetry;  ///< logged records, always including t = 0 and the final state
  InvariantReport report;
  WorldState final_world;
};

/// Tolerances used by the invariant monitor.
struct InvariantTolerances {
  double safety = 1e-3;             ///< D >= r_s - safety
  double floor = 1e-9;              ///< rho_hat >= h - floor
  double underestimate = 1e-6;      ///< rho_hat <= rho + underestimate
  double monotone_rate = 1e-6;      ///< rho_tilde may drop by at most rate * elapsed time
  double gap_sum = 1e-9;
  double relative_setpoint = 0.02;  ///< distance and speed at t_final
  double localization = 1e-2;
  double gap_spread = 0.05;
  double gap_extremes = 1e-6;
  double on_orbit = 1e-2;           ///< radial error / center spread defining "near equilibrium"
};

class Simulator {
 public:
  explicit Simulator(Scenario scenario);

  [[nodiscard]] const Scenario& scenario() const { return scenario_; }
  [[nodiscard]] const ConvexPolygon& target_hull() const { return hull_; }
  [[nodiscard]] const Circle& target_circle() const { return circle_; }

  [[nodiscard]] WorldState initial_state() const;
  /// Advances one dt. Throws circumnav::Error (AtCenter, ZeroRange, ...) on a run failure.
  [[nodiscard]] StepResult step(const WorldState& world) const;
  /// Observables of `world` without advancing it.
  [[nodiscard]] TelemetryRecord observe(const WorldState& world) const;
  [[nodiscard]] RunResult run(const InvariantTolerances& tol = {}) const;

  /// Expected steady-state tangential speed of agent a.
  [[nodiscard]] double expected_speed(std::size_t agent) const;

 private:
  struct Evaluation;
  using History = std::vector<std::vector<std::optional<BearingSample>>>;

  [[nodiscard]] Evaluation evaluate(double t, const std::vector<Vec2>& positions,
                                    const std::vector<std::vector<double>>& rho_hats, const History& history) const;
  [[nodiscard]] TelemetryRecord make_record(const WorldState& world, const Evaluation& eval) const;

  Scenario scenario_;
  ConvexPolygon hull_;
  Circle circle_;
};

StepResult step(const WorldState& world, const Scenario& scenario);
RunResult run(const Scenario& scenario, const InvariantTolerances& tol = {});

}  // namespace circumnav
