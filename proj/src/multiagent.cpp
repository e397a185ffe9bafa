#include "circumnav/multiagent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "circumnav/error.hpp"

namespace circumnav {

namespace {

double center_direction_angle(double theta_a, double theta_b) {
  return angle_between(UnitVec2::from_angle(theta_a), UnitVec2::from_angle(theta_b));
}

}  // namespace

GainFunction GainFunction::exponential() {
  return {"exponential", [](double x) { return std::isinf(x) ? 1.0 : 1.0 - std::exp(-x); }};
}

NeighborGeometry neighbor_geometry(std::span<const AgentView> views, std::size_t i, double M) {
  if (i >= views.size()) throw Error(Errc::InvalidArgument, "agent index out of range");
  const AgentView& self = views[i];

  NeighborGeometry g;
  std::optional<double> best_plus;
  std::optional<double> best_minus;
  for (std::size_t j = 0; j < views.size(); ++j) {
    if (j == i) continue;
    const Vec2 rel = views[j].position - self.position;
    const double dist = rel.norm();
    if (dist <= kEps) throw Error(Errc::CoincidentAgents, "agents share a position");
    if (dist > M) continue;
    g.neighbor_set.push_back(j);

    const double bearing = std::atan2(rel.y, rel.x);
    const double rel_angle = wrap_pi(self.theta - bearing);
    if (rel_angle > 0.0 && rel_angle < std::numbers::pi) {
      if (!best_plus || rel_angle > *best_plus) {
        best_plus = rel_angle;
        g.i_plus = j;
      }
    } else if (rel_angle < 0.0 && rel_angle > -std::numbers::pi) {
      if (!best_minus || rel_angle < *best_minus) {
        best_minus = rel_angle;
        g.i_minus = j;
      }
    }
  }

  g.sigma_plus = g.i_plus ? center_direction_angle(views[*g.i_plus].theta, self.theta) : std::numbers::pi;
  g.sigma_minus = g.i_minus ? center_direction_angle(views[*g.i_minus].theta, self.theta) : std::numbers::pi;
  g.sigma_plus = std::max(g.sigma_plus, kMinSigma);
  g.sigma_minus = std::max(g.sigma_minus, kMinSigma);
  return g;
}

double coordination_gain(double sigma_plus, double sigma_minus, const GainFunction& gain_fn) {
  if (!(sigma_minus > 0.0)) throw Error(Errc::InvalidArgument, "sigma_minus must be positive");
  return gain_fn(sigma_plus / sigma_minus);
}

double radius_scale(const CircumnavState& state_i, const FormationParams& formation) {
  if (formation.radius_scaling == RadiusScaling::Raw) return state_i.r_hat;
  if (formation.per_agent_d.empty()) return 1.0;
  const double d_min = *std::min_element(formation.per_agent_d.begin(), formation.per_agent_d.end());
  return state_i.r_hat / (state_i.circle.radius + d_min);
}

Vec2 multi_control_input(const CircumnavState& state_i, const NeighborGeometry& geom, const ControlParams& params,
                         const FormationParams& formation, std::size_t /*i*/) {
  Vec2 cmd = radial_command(state_i, params);
  if (tangential_enabled(state_i, params)) {
    const double gain = coordination_gain(geom.sigma_plus, geom.sigma_minus, formation.gain_fn);
    cmd += (gain * params.alpha * radius_scale(state_i, formation)) * rotate_cw_90(state_i.phi_hat);
  }
  return cmd;
}

std::vector<double> angular_gaps(std::span<const AgentView> views) {
  const std::size_t n = views.size();
  std::vector<double> gaps(n, 2.0 * std::numbers::pi);
  if (n <= 1) return gaps;

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = wrap_two_pi(views[i].theta + std::numbers::pi);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phi[a] < phi[b]; });

  for (std::size_t k = 0; k + 1 < n; ++k) gaps[order[k]] = phi[order[k + 1]] - phi[order[k]];
  gaps[order[n - 1]] = phi[order[0]] + 2.0 * std::numbers::pi - phi[order[n - 1]];
  return gaps;
}

}  // namespace circumnav
