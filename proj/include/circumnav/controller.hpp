#pragma once

#include <span>

#include "circumnav/geometry.hpp"

namespace circumnav {

struct ControlParams {
  double k{5.0};      ///< radial gain [1/s]
  double alpha{5.0};  ///< desired tangential speed [m/s]
  double r_s{0.3};    ///< safety distance [m]
  double d{0.4};      ///< desired distance outside the minimum circle [m]
};

/// Estimated minimum-circle geometry as seen from one agent.
struct CircumnavState {
  Circle circle;         ///< minimum circle of the estimated target positions
  SupportSet support;
  double rho_hat_c{0.0};  ///< distance agent -> estimated center
  UnitVec2 phi_hat;       ///< unit vector agent -> estimated center
  double r_hat{0.0};      ///< circle.radius + d
};

/// Agent/center distance below which the direction to the center is treated as undefined.
inline constexpr double kAtCenterThreshold = 1e-9;

/// Throws Errc::EmptyPointSet for no estimates and Errc::AtCenter when the
/// agent sits on the estimated center.
CircumnavState estimation_geometry(Vec2 agent, std::span<const Vec2> estimates, double d,
                                   std::uint64_t shuffle_seed = 0x5eedULL);

/// Radial part k (rho_hat - r_hat) phi_hat.
Vec2 radial_command(const CircumnavState& state, const ControlParams& params);
/// True when the tangential term is switched on: rho_hat - r_hat_t - r_s >= 0.
bool tangential_enabled(const CircumnavState& state, const ControlParams& params);

/// Single-agent protocol:
///   ydot = k (rho_hat - r_hat) phi_hat + alpha u(rho_hat - r_hat_t - r_s) phibar_hat
Vec2 control_input(const CircumnavState& state, const ControlParams& params);

}  // namespace circumnav
