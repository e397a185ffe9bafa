#include "circumnav/estimator.hpp"

#include <algorithm>

#include "circumnav/error.hpp"

namespace circumnav {

UnitVec2 measure_bearing(Vec2 agent, Vec2 target) {
  const Vec2 delta = target - agent;
  if (!(delta.norm() > 0.0)) throw Error(Errc::ZeroRange, "agent and target coincide");
  return UnitVec2::normalize(delta);
}

Vec2 bearing_rate(const BearingSample& prev, const BearingSample& curr) {
  if (!(curr.t > prev.t)) throw Error(Errc::TimeOrder, "bearing samples must have increasing time");
  const Vec2 raw = (curr.phi.vec() - prev.phi.vec()) / (curr.t - prev.t);
  const Vec2 tangent = rotate_cw_90(curr.phi.vec());
  return tangent * dot(tangent, raw);
}

Vec2 analytic_bearing_rate(UnitVec2 phi, Vec2 agent_vel, double rho) {
  const Vec2 phibar = rotate_cw_90(phi.vec());
  return phibar * (-dot(phibar, agent_vel) / rho);
}

double compensator_rate(const CompensatorState& state, UnitVec2 phi, Vec2 phi_dot, Vec2 agent_vel) {
  const Vec2 phibar = rotate_cw_90(phi.vec());
  const double radial = dot(phi, agent_vel);
  const double tangential = dot(phibar, agent_vel);
  return -radial * unit_step(state.rho_hat - state.h) +
         sign(tangential) * (tangential + state.rho_hat * dot(phibar, phi_dot));
}

CompensatorState compensator_step(const CompensatorState& state, UnitVec2 phi, Vec2 phi_dot, Vec2 agent_vel,
                                  double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  CompensatorState next = state;
  next.rho_hat = std::max(state.rho_hat + dt * compensator_rate(state, phi, phi_dot, agent_vel), state.h);
  return next;
}

}  // namespace circumnav
