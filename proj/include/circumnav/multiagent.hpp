#pragma once
/**
 * @file multiagent.hpp
 * @brief Coordination layer for several agents sharing the same targets.
 *
 * Agent i looks at neighbours within range M, orders them by the wrapped
 * angle theta_i - theta_i^j (theta_i is the direction to its own estimated
 * center, theta_i^j the direction to neighbour j), and scales its tangential
 * speed by f(sigma+ / sigma-), where sigma+- are the angles between its own
 * center direction and that of the closest neighbour ahead / behind.
 */

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circumnav/controller.hpp"
#include "circumnav/geometry.hpp"

namespace circumnav {

struct AgentView {
  std::size_t id{0};
  Vec2 position;
  double theta{0.0};  ///< angle of the unit vector to the own estimated center, in [0, 2pi)
  Vec2 est_center;
  double est_circle_radius{0.0};
};

struct NeighborGeometry {
  std::vector<std::size_t> neighbor_set;
  std::optional<std::size_t> i_plus;
  std::optional<std::size_t> i_minus;
  double sigma_plus{0.0};
  double sigma_minus{0.0};
};

/// Strictly increasing continuous map (0, inf] -> (0, 1].
class GainFunction {
 public:
  GainFunction(std::string name, std::function<double(double)> fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  /// f(x) = 1 - exp(-x)
  static GainFunction exponential();

  double operator()(double x) const { return fn_(x); }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
};

enum class RadiusScaling {
  Normalized,  ///< tangential term scaled by r_hat_i / (r_hat_t_i + min_j d_j)
  Raw,         ///< tangential term scaled by r_hat_i itself
};

struct FormationParams {
  double M{8.0};
  GainFunction gain_fn{GainFunction::exponential()};
  std::vector<double> per_agent_d;
  RadiusScaling radius_scaling{RadiusScaling::Normalized};
};

/// Lower bound applied to sigma+- so that their ratio stays inside the gain domain.
inline constexpr double kMinSigma = 1e-12;

/// Throws Errc::CoincidentAgents if another agent shares agent i's position.
NeighborGeometry neighbor_geometry(std::span<const AgentView> views, std::size_t i, double M);

double coordination_gain(double sigma_plus, double sigma_minus, const GainFunction& gain_fn);

/// Multiplier applied to the tangential term for agent i's desired radius.
double radius_scale(const CircumnavState& state_i, const FormationParams& formation);

Vec2 multi_control_input(const CircumnavState& state_i, const NeighborGeometry& geom, const ControlParams& params,
                         const FormationParams& formation, std::size_t i);

/// Angular gaps around the orbit. phi_i = theta_i + pi (mod 2pi) is the
/// direction from the estimated center to agent i; gaps[i] is the CCW angle
/// from agent i to the next agent in that ordering. Sums to 2pi.
std::vector<double> angular_gaps(std::span<const AgentView> views);

}  // namespace circumnav
