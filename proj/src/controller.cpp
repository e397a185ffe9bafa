#include "circumnav/controller.hpp"

#include "circumnav/error.hpp"
#include "circumnav/estimator.hpp"

namespace circumnav {

CircumnavState estimation_geometry(Vec2 agent, std::span<const Vec2> estimates, double d,
                                   std::uint64_t shuffle_seed) {
  const auto mec = min_enclosing_circle(estimates, shuffle_seed);
  const Vec2 to_center = mec.circle.center - agent;
  const double rho = to_center.norm();
  if (rho < kAtCenterThreshold) throw Error(Errc::AtCenter, "agent is at the estimated circle center");
  return {mec.circle, mec.support, rho, UnitVec2::normalize(to_center), mec.circle.radius + d};
}

Vec2 radial_command(const CircumnavState& state, const ControlParams& params) {
  return params.k * (state.rho_hat_c - state.r_hat) * state.phi_hat;
}

bool tangential_enabled(const CircumnavState& state, const ControlParams& params) {
  return unit_step(state.rho_hat_c - state.circle.radius - params.r_s) > 0.0;
}

Vec2 control_input(const CircumnavState& state, const ControlParams& params) {
  Vec2 cmd = radial_command(state, params);
  if (tangential_enabled(state, params)) cmd += params.alpha * rotate_cw_90(state.phi_hat);
  return cmd;
}

}  // namespace circumnav
