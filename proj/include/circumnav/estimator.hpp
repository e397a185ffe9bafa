#pragma once
/**
 * @file estimator.hpp
 * @brief Per-target dynamic compensator reconstructing range from bearings.
 *
 * Each target i carries a scalar rho_hat_i (the estimated range along the
 * measured bearing phi_i). Its rate is
 *
 *   rho_hat_dot = -phi^T ydot * u(rho_hat - h)
 *                 + sgn(phibar^T ydot) * (phibar^T ydot + rho_hat * phibar^T phi_dot)
 *
 * with phibar = phi rotated 90 degrees clockwise, u(0) = 1 and sgn(0) = 0.
 * The estimated target position is y + rho_hat * phi.
 */

#include <optional>

#include "circumnav/geometry.hpp"

namespace circumnav {

enum class BearingRateMode {
  NumericBackward,  ///< backward difference of sampled bearings
  AnalyticOracle,   ///< exact rate from ground truth range (tests, reference runs)
};

struct EstimatorParams {
  double h{0.1};
  BearingRateMode bearing_rate_mode{BearingRateMode::NumericBackward};
};

struct CompensatorState {
  double rho_hat{0.0};
  double h{0.1};
};

struct BearingSample {
  UnitVec2 phi;
  double t{0.0};
};

/// Unit step with u(0) = 1.
constexpr double unit_step(double x) { return x >= 0.0 ? 1.0 : 0.0; }
/// Sign with sgn(0) = 0.
constexpr double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Unit vector from agent to target. Throws Errc::ZeroRange when they coincide.
UnitVec2 measure_bearing(Vec2 agent, Vec2 target);

/// Backward-difference bearing rate, projected onto the line of
/// rotate_cw_90(curr.phi) since the true rate is orthogonal to phi.
/// Throws Errc::TimeOrder unless curr.t > prev.t.
Vec2 bearing_rate(const BearingSample& prev, const BearingSample& curr);

/// Exact bearing rate -(vbar / rho) * phibar from ground-truth range.
Vec2 analytic_bearing_rate(UnitVec2 phi, Vec2 agent_vel, double rho);

/// Time derivative of rho_hat.
double compensator_rate(const CompensatorState& state, UnitVec2 phi, Vec2 phi_dot, Vec2 agent_vel);

/// One explicit Euler step of the compensator followed by the floor clamp
/// rho_hat >= h. The simulator integrates compensator_rate with its own
/// scheme and applies the same clamp.
CompensatorState compensator_step(const CompensatorState& state, UnitVec2 phi, Vec2 phi_dot, Vec2 agent_vel,
                                  double dt);

inline Vec2 estimated_position(const CompensatorState& state, Vec2 agent, UnitVec2 phi) {
  return agent + state.rho_hat * phi;
}

}  // namespace circumnav
