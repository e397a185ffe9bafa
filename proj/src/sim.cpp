#include "circumnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "circumnav/error.hpp"

namespace circumnav {

struct Simulator::Evaluation {
  std::vector<Vec2> velocity;
  std::vector<std::vector<double>> rho_hat_dot;
  std::vector<std::vector<UnitVec2>> phi;
  std::vector<std::vector<Vec2>> phi_dot;
  std::vector<CircumnavState> states;
  std::vector<AgentView> views;
  std::vector<NeighborGeometry> neighbors;
};

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Matrix = std::vector<std::vector<double>>;

std::vector<Vec2> axpy(const std::vector<Vec2>& x, double a, const std::vector<Vec2>& y) {
  std::vector<Vec2> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

Matrix axpy(const Matrix& x, double a, const Matrix& y) {
  Matrix out = x;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x[i].size(); ++j) out[i][j] += a * y[i][j];
  return out;
}

}  // namespace

bool InvariantReport::all_passed() const {
  return completed && std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

const InvariantCheck* InvariantReport::find(std::string_view name) const {
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const InvariantCheck& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)) {
  validate(scenario_);
  hull_ = convex_hull(scenario_.targets);
  circle_ = min_enclosing_circle(scenario_.targets).circle;
  if (scenario_.formation.per_agent_d.size() != scenario_.agents.size()) {
    scenario_.formation.per_agent_d.clear();
    for (const auto& a : scenario_.agents) scenario_.formation.per_agent_d.push_back(a.d);
  }
}

WorldState Simulator::initial_state() const {
  WorldState w;
  for (const auto& a : scenario_.agents) {
    w.agent_positions.push_back(a.initial_position);
    std::vector<CompensatorState> comps;
    for (double rh : a.initial_rho_hats) comps.push_back({rh, scenario_.estimator.h});
    w.compensators.push_back(std::move(comps));
    w.last_bearings.emplace_back(scenario_.targets.size());
  }
  return w;
}

Simulator::Evaluation Simulator::evaluate(double t, const std::vector<Vec2>& positions, const Matrix& rho_hats,
                                          const History& history) const {
  const std::size_t n_agents = positions.size();
  const std::size_t n_targets = scenario_.targets.size();
  const double h = scenario_.estimator.h;

  Evaluation e;
  e.phi.resize(n_agents);
  e.states.reserve(n_agents);
  std::vector<Vec2> estimates(n_targets);
  for (std::size_t a = 0; a < n_agents; ++a) {
    for (std::size_t i = 0; i < n_targets; ++i) {
      e.phi[a].push_back(measure_bearing(positions[a], scenario_.targets[i]));
      estimates[i] = estimated_position({rho_hats[a][i], h}, positions[a], e.phi[a][i]);
    }
    e.states.push_back(estimation_geometry(positions[a], estimates, scenario_.agents[a].d, scenario_.seed));
  }

  e.velocity.resize(n_agents);
  if (n_agents == 1) {
    e.velocity[0] = control_input(e.states[0], scenario_.control);
  } else {
    for (std::size_t a = 0; a < n_agents; ++a) {
      e.views.push_back({a, positions[a], wrap_two_pi(e.states[a].phi_hat.angle()), e.states[a].circle.center,
                         e.states[a].circle.radius});
    }
    for (std::size_t a = 0; a < n_agents; ++a) {
      e.neighbors.push_back(neighbor_geometry(e.views, a, scenario_.formation.M));
      e.velocity[a] = multi_control_input(e.states[a], e.neighbors[a], scenario_.control, scenario_.formation, a);
    }
  }

  e.phi_dot.assign(n_agents, std::vector<Vec2>(n_targets));
  e.rho_hat_dot.assign(n_agents, std::vector<double>(n_targets, 0.0));
  for (std::size_t a = 0; a < n_agents; ++a) {
    for (std::size_t i = 0; i < n_targets; ++i) {
      const UnitVec2 phi = e.phi[a][i];
      Vec2 phi_dot;
      if (scenario_.estimator.bearing_rate_mode == BearingRateMode::AnalyticOracle) {
        phi_dot = analytic_bearing_rate(phi, e.velocity[a], distance(scenario_.targets[i], positions[a]));
      } else if (history[a][i]) {
        phi_dot = bearing_rate(*history[a][i], {phi, t});
      }
      e.phi_dot[a][i] = phi_dot;
      e.rho_hat_dot[a][i] = compensator_rate({rho_hats[a][i], h}, phi, phi_dot, e.velocity[a]);
    }
  }
  return e;
}

TelemetryRecord Simulator::make_record(const WorldState& world, const Evaluation& e) const {
  const std::size_t n_agents = world.agent_positions.size();
  const std::size_t n_targets = scenario_.targets.size();

  TelemetryRecord r;
  r.t = world.t;
  r.step_index = world.step_index;
  const std::vector<double> gaps = n_agents > 1 ? angular_gaps(e.views) : std::vector<double>{kTwoPi};
  r.min_agent_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n_agents; ++a)
    for (std::size_t b = a + 1; b < n_agents; ++b)
      r.min_agent_distance = std::min(r.min_agent_distance, distance(world.agent_positions[a], world.agent_positions[b]));

  for (std::size_t a = 0; a < n_agents; ++a) {
    const Vec2 y = world.agent_positions[a];
    const Vec2 vel = e.velocity[a];
    AgentTelemetry at;
    at.position = y;
    at.velocity = vel;
    at.hull_distance = dist_to_hull(y, hull_);
    const double rho_c = distance(circle_.center, y);
    at.circle_distance = rho_c - circle_.radius;
    at.tangential_speed = rho_c > 0.0 ? dot(rotate_cw_90(UnitVec2::normalize(circle_.center - y)), vel) : 0.0;
    at.est_center = e.states[a].circle.center;
    at.est_radius = e.states[a].circle.radius;
    at.rho_hat_c = e.states[a].rho_hat_c;
    at.tangential_on = tangential_enabled(e.states[a], scenario_.control);
    at.gap = gaps[a];
    at.sigma_plus = n_agents > 1 ? e.neighbors[a].sigma_plus : std::numbers::pi;
    at.sigma_minus = n_agents > 1 ? e.neighbors[a].sigma_minus : std::numbers::pi;
    for (std::size_t i = 0; i < n_targets; ++i) {
      TargetTelemetry tt;
      const UnitVec2 phi = e.phi[a][i];
      tt.rho = distance(scenario_.targets[i], y);
      tt.rho_hat = world.compensators[a][i].rho_hat;
      tt.rho_tilde = tt.rho_hat - tt.rho;
      tt.rho_hat_dot = e.rho_hat_dot[a][i];
      tt.v = dot(phi, vel);
      tt.vbar = dot(rotate_cw_90(phi), vel);
      tt.omega = tt.vbar / tt.rho;
      tt.phi = phi.vec();
      tt.phi_dot = e.phi_dot[a][i];
      tt.estimate = y + tt.rho_hat * phi;
      at.targets.push_back(tt);
    }
    r.gap_sum += at.gap;
    r.agents.push_back(std::move(at));
  }
  return r;
}

StepResult Simulator::step(const WorldState& world) const {
  const double dt = scenario_.dt;
  const double t = world.t;
  const std::size_t n_agents = world.agent_positions.size();
  const std::size_t n_targets = scenario_.targets.size();

  Matrix rho0(n_agents, std::vector<double>(n_targets));
  for (std::size_t a = 0; a < n_agents; ++a)
    for (std::size_t i = 0; i < n_targets; ++i) rho0[a][i] = world.compensators[a][i].rho_hat;
  const auto& y0 = world.agent_positions;

  const Evaluation k1 = evaluate(t, y0, rho0, world.last_bearings);
  History now(n_agents, std::vector<std::optional<BearingSample>>(n_targets));
  for (std::size_t a = 0; a < n_agents; ++a)
    for (std::size_t i = 0; i < n_targets; ++i) now[a][i] = BearingSample{k1.phi[a][i], t};

  std::vector<Vec2> y1;
  Matrix rho1;
  if (scenario_.integrator == Integrator::Euler) {
    y1 = axpy(y0, dt, k1.velocity);
    rho1 = axpy(rho0, dt, k1.rho_hat_dot);
  } else {
    const Evaluation k2 = evaluate(t + dt / 2, axpy(y0, dt / 2, k1.velocity), axpy(rho0, dt / 2, k1.rho_hat_dot), now);
    const Evaluation k3 = evaluate(t + dt / 2, axpy(y0, dt / 2, k2.velocity), axpy(rho0, dt / 2, k2.rho_hat_dot), now);
    const Evaluation k4 = evaluate(t + dt, axpy(y0, dt, k3.velocity), axpy(rho0, dt, k3.rho_hat_dot), now);
    y1 = y0;
    rho1 = rho0;
    for (std::size_t a = 0; a < n_agents; ++a) {
      y1[a] += (dt / 6.0) * (k1.velocity[a] + 2.0 * k2.velocity[a] + 2.0 * k3.velocity[a] + k4.velocity[a]);
      for (std::size_t i = 0; i < n_targets; ++i) {
        rho1[a][i] += (dt / 6.0) * (k1.rho_hat_dot[a][i] + 2.0 * k2.rho_hat_dot[a][i] + 2.0 * k3.rho_hat_dot[a][i] +
                                    k4.rho_hat_dot[a][i]);
      }
    }
  }

  StepResult out;
  out.record = make_record(world, k1);
  WorldState& next = out.world;
  next.step_index = world.step_index + 1;
  next.t = static_cast<double>(next.step_index) * dt;
  next.agent_positions = std::move(y1);
  next.compensators = world.compensators;
  for (std::size_t a = 0; a < n_agents; ++a)
    for (std::size_t i = 0; i < n_targets; ++i)
      next.compensators[a][i].rho_hat = std::max(rho1[a][i], next.compensators[a][i].h);
  next.last_bearings = std::move(now);
  return out;
}

TelemetryRecord Simulator::observe(const WorldState& world) const {
  Matrix rho(world.compensators.size());
  for (std::size_t a = 0; a < world.compensators.size(); ++a)
    for (const auto& c : world.compensators[a]) rho[a].push_back(c.rho_hat);
  return make_record(world, evaluate(world.t, world.agent_positions, rho, world.last_bearings));
}

double Simulator::expected_speed(std::size_t agent) const {
  const auto& s = scenario_;
  if (s.agents.size() == 1) return s.control.alpha;
  const double d_min = *std::min_element(s.formation.per_agent_d.begin(), s.formation.per_agent_d.end());
  const double r = circle_.radius + s.agents.at(agent).d;
  const double scale = s.formation.radius_scaling == RadiusScaling::Raw ? r : r / (circle_.radius + d_min);
  return s.formation.gain_fn(1.0) * s.control.alpha * scale;
}

namespace {

class InvariantMonitor {
 public:
  InvariantMonitor(const Simulator& sim, const InvariantTolerances& tol) : sim_(sim), tol_(tol) {
    const auto& s = sim.scenario();
    prev_tilde_.assign(s.agents.size(), std::vector<double>(s.targets.size(), 0.0));
  }

  void add(const TelemetryRecord& r) {
    const auto& s = sim_.scenario();
    const double h = s.estimator.h;
    double max_abs_tilde = 0.0;
    for (std::size_t a = 0; a < r.agents.size(); ++a) {
      const auto& at = r.agents[a];
      min_hull_ = std::min(min_hull_, at.hull_distance);
      for (std::size_t i = 0; i < at.targets.size(); ++i) {
        const auto& tt = at.targets[i];
        max_tilde_ = std::max(max_tilde_, tt.rho_tilde);
        min_floor_ = std::min(min_floor_, tt.rho_hat - h);
        max_abs_tilde = std::max(max_abs_tilde, std::abs(tt.rho_tilde));
        if (have_prev_) {
          const double drop = prev_tilde_[a][i] - tt.rho_tilde - tol_.monotone_rate * (r.t - prev_t_);
          worst_drop_ = std::max(worst_drop_, drop);
        }
        prev_tilde_[a][i] = tt.rho_tilde;
      }
    }
    if (max_abs_tilde >= tol_.localization) {
      t_conv_.reset();
    } else if (!t_conv_) {
      t_conv_ = r.t;
    }
    gap_sum_err_ = std::max(gap_sum_err_, std::abs(r.gap_sum - kTwoPi));
    min_agent_dist_ = std::min(min_agent_dist_, r.min_agent_distance);

    if (r.agents.size() > 1) {
      const bool on_orbit = near_equilibrium(r);
      const auto [lo, hi] = std::minmax_element(r.agents.begin(), r.agents.end(),
                                                [](const auto& x, const auto& y) { return x.gap < y.gap; });
      if (on_orbit && prev_on_orbit_) {
        worst_extreme_ = std::max(worst_extreme_, hi->gap - prev_max_gap_);
        worst_extreme_ = std::max(worst_extreme_, prev_min_gap_ - lo->gap);
        extremes_checked_ = true;
      }
      prev_on_orbit_ = on_orbit;
      prev_max_gap_ = hi->gap;
      prev_min_gap_ = lo->gap;
    }

    prev_t_ = r.t;
    have_prev_ = true;
    last_ = r;
    ++count_;
  }

  InvariantReport finish(std::optional<std::string> failure) const {
    const auto& s = sim_.scenario();
    InvariantReport rep;
    rep.scenario = s.name;
    rep.certified = s.certified();
    rep.warnings = s.warnings;
    rep.completed = !failure.has_value();
    rep.failure = std::move(failure);
    rep.t_final = last_.t;
    rep.steps = last_.step_index;
    rep.min_hull_distance = min_hull_;
    rep.max_rho_tilde = max_tilde_;
    rep.min_floor_margin = min_floor_;
    rep.worst_monotone_drop = worst_drop_;
    rep.t_conv = t_conv_;
    rep.max_gap_sum_error = gap_sum_err_;
    rep.min_agent_distance = min_agent_dist_;

    const double r_s = s.control.r_s;
    rep.checks.push_back({"safety", min_hull_ >= r_s - tol_.safety, min_hull_, r_s - tol_.safety,
                          "min over steps of D(t) >= r_s - tol"});
    rep.checks.push_back({"estimator_floor", min_floor_ >= -tol_.floor, min_floor_, -tol_.floor,
                          "min over steps of rho_hat - h"});
    rep.checks.push_back({"estimator_underestimate", max_tilde_ <= tol_.underestimate, max_tilde_,
                          tol_.underestimate, "max over steps of rho_hat - rho"});
    rep.checks.push_back({"estimator_monotone", worst_drop_ <= 0.0, worst_drop_, 0.0,
                          "largest drop of rho_tilde beyond 1e-6 * elapsed time"});

    double dist_err = 0.0, dist_ratio = 0.0, speed_err = 0.0, speed_ratio = 0.0, max_abs_tilde = 0.0;
    for (std::size_t a = 0; a < last_.agents.size(); ++a) {
      const auto& at = last_.agents[a];
      const double d = s.agents[a].d;
      const double e = std::abs(at.circle_distance - d);
      dist_err = std::max(dist_err, e);
      dist_ratio = std::max(dist_ratio, e / d);
      const double v_ref = sim_.expected_speed(a);
      const double ve = std::abs(at.tangential_speed - v_ref);
      speed_err = std::max(speed_err, ve);
      speed_ratio = std::max(speed_ratio, ve / v_ref);
      for (const auto& tt : at.targets) max_abs_tilde = std::max(max_abs_tilde, std::abs(tt.rho_tilde));
    }
    rep.final_distance_error = dist_err;
    rep.final_speed_error = speed_err;
    rep.final_max_abs_rho_tilde = max_abs_tilde;
    rep.checks.push_back({"distance_convergence", dist_ratio <= tol_.relative_setpoint, dist_ratio,
                          tol_.relative_setpoint, "max_i |rho_i - r_t - d_i| / d_i at t_final"});
    rep.checks.push_back({"speed_convergence", speed_ratio <= tol_.relative_setpoint, speed_ratio,
                          tol_.relative_setpoint, "max_i |tangential speed - expected| / expected at t_final"});
    rep.checks.push_back({"localization", max_abs_tilde <= tol_.localization, max_abs_tilde, tol_.localization,
                          "max |rho_tilde| at t_final"});

    if (last_.agents.size() > 1) {
      const double n = static_cast<double>(last_.agents.size());
      double spread = 0.0;
      for (const auto& at : last_.agents) spread = std::max(spread, std::abs(at.gap - kTwoPi / n));
      rep.final_gap_spread = spread;
      rep.checks.push_back({"gap_conservation", gap_sum_err_ <= tol_.gap_sum, gap_sum_err_, tol_.gap_sum,
                            "max over steps of |sum delta phi - 2pi|"});
      rep.checks.push_back({"gap_convergence", spread <= tol_.gap_spread, spread, tol_.gap_spread,
                            "max_i |delta phi_i - 2pi/n| at t_final"});
      rep.checks.push_back({"gap_extremes_monotone", worst_extreme_ <= tol_.gap_extremes, worst_extreme_,
                            tol_.gap_extremes,
                            extremes_checked_ ? "max gap non-increasing, min gap non-decreasing near equilibrium"
                                              : "equilibrium neighbourhood never reached; nothing to check"});
    }
    if (!rep.completed) rep.checks.push_back({"run_completed", false, rep.t_final, s.t_end, *rep.failure});
    return rep;
  }

 private:
  bool near_equilibrium(const TelemetryRecord& r) const {
    const auto& s = sim_.scenario();
    for (std::size_t a = 0; a < r.agents.size(); ++a) {
      const auto& at = r.agents[a];
      if (!at.tangential_on) return false;
      if (std::abs(at.rho_hat_c - (at.est_radius + s.agents[a].d)) > tol_.on_orbit) return false;
      if (distance(at.est_center, r.agents[0].est_center) > tol_.on_orbit) return false;
    }
    return true;
  }

  const Simulator& sim_;
  InvariantTolerances tol_;
  std::vector<std::vector<double>> prev_tilde_;
  double prev_t_{0.0};
  bool have_prev_{false};
  double min_hull_{std::numeric_limits<double>::infinity()};
  double max_tilde_{-std::numeric_limits<double>::infinity()};
  double min_floor_{std::numeric_limits<double>::infinity()};
  double worst_drop_{0.0};
  std::optional<double> t_conv_;
  double gap_sum_err_{0.0};
  double min_agent_dist_{std::numeric_limits<double>::infinity()};
  bool prev_on_orbit_{false};
  double prev_max_gap_{0.0};
  double prev_min_gap_{0.0};
  double worst_extreme_{0.0};
  bool extremes_checked_{false};
  TelemetryRecord last_;
  std::size_t count_{0};
};

}  // namespace

RunResult Simulator::run(const InvariantTolerances& tol) const {
  RunResult out;
  InvariantMonitor monitor(*this, tol);
  WorldState world = initial_state();
  const auto n_steps = static_cast<std::size_t>(std::llround(scenario_.t_end / scenario_.dt));

  std::optional<std::string> failure;
  try {
    for (std::size_t k = 0; k < n_steps; ++k) {
      StepResult r = step(world);
      monitor.add(r.record);
      if (k % scenario_.log_stride == 0) out.telemetry.push_back(std::move(r.record));
      world = std::move(r.world);
    }
    TelemetryRecord last = observe(world);
    monitor.add(last);
    out.telemetry.push_back(std::move(last));
  } catch (const Error& e) {
    failure = fmt::format("t = {:.6f}: {}", world.t, e.what());
  }
  out.report = monitor.finish(std::move(failure));
  out.final_world = std::move(world);
  return out;
}

StepResult step(const WorldState& world, const Scenario& scenario) { return Simulator(scenario).step(world); }

RunResult run(const Scenario& scenario, const InvariantTolerances& tol) { return Simulator(scenario).run(tol); }

}  // namespace circumnav
