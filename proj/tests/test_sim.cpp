#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "circumnav/error.hpp"
#include "circumnav/scenario.hpp"
#include "circumnav/sim.hpp"
#include "circumnav/telemetry.hpp"
#include "doctest.h"

using namespace circumnav;
using doctest::Approx;

namespace {

const std::string kPresets = CIRCUMNAV_PRESET_DIR;

Scenario preset(const std::string& name, std::vector<std::string> ov = {}) {
  return load_scenario_file(kPresets + "/" + name + ".yaml", ov);
}

std::string csv_of(const Scenario& s, const RunResult& r) {
  std::ostringstream out;
  write_telemetry_csv(out, s, r.telemetry);
  return out.str();
}

Scenario single_target(double x0, double rho_hat0, double d, double r_s = 0.3) {
  Scenario s;
  s.name = "single";
  s.targets = {{0, 0}};
  s.agents = {AgentConfig{{x0, 0}, {rho_hat0}, d}};
  s.control = {5, 5, r_s, d};
  s.estimator = {0.1, BearingRateMode::AnalyticOracle};
  s.formation.per_agent_d = {d};
  s.t_end = 1.0;
  s.log_stride = 1;
  validate(s);
  s.warnings = check_assumptions(s);
  return s;
}

// Consecutive per-step records away from the tangential switching surface,
// where the RK4 stages of one step may see different branches of the command.
bool smooth(const AgentTelemetry& a, const AgentTelemetry& b, double r_s = 0.3) {
  for (const auto* x : {&a, &b})
    if (std::abs(x->rho_hat_c - x->est_radius - r_s) < 0.05) return false;
  if (a.tangential_on != b.tangential_on) return false;
  if (distance(a.velocity, b.velocity) > 0.05) return false;
  for (std::size_t i = 0; i < a.targets.size(); ++i)
    if (std::abs(a.targets[i].rho_hat_dot - b.targets[i].rho_hat_dot) > 0.05) return false;
  return true;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("repeated runs are bit-identical") {
  const auto s = preset("case1", {"sim.t_end=3"});
  const auto a = run(s);
  const auto b = run(s);
  CHECK(csv_of(s, a) == csv_of(s, b));
  CHECK(report_to_json(a.report, s) == report_to_json(b.report, s));
  for (std::size_t k = 0; k < a.telemetry.size(); ++k) {
    CHECK(a.telemetry[k].agents[0].position.x == b.telemetry[k].agents[0].position.x);
    CHECK(a.telemetry[k].agents[0].position.y == b.telemetry[k].agents[0].position.y);
  }
}

TEST_CASE("concurrent runs match a sequential run") {
  const auto s = preset("case2", {"sim.t_end=2"});
  const std::string reference = csv_of(s, run(s));
  std::vector<std::string> results(4);
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < results.size(); ++i)
    pool.emplace_back([&, i] { results[i] = csv_of(s, run(s)); });
  for (auto& t : pool) t.join();
  for (const auto& r : results) CHECK(r == reference);
}

TEST_CASE("zero command is a fixed point") {
  // d < r_s: on the orbit the tangential term is off and the radial error is zero.
  const auto s = single_target(0.2, 0.2, 0.2);
  CHECK_FALSE(s.certified());
  const Simulator sim(s);
  const WorldState w0 = sim.initial_state();
  const StepResult r = sim.step(w0);
  CHECK(r.record.agents[0].velocity == Vec2{0, 0});
  CHECK(r.world.agent_positions[0] == w0.agent_positions[0]);
  CHECK(r.world.compensators[0][0].rho_hat == w0.compensators[0][0].rho_hat);
  CHECK(r.world.t == s.dt);

  const StepResult free_fn = step(w0, s);
  CHECK(free_fn.world.agent_positions[0] == r.world.agent_positions[0]);
}

TEST_CASE("on-orbit agent with a converged estimate follows the analytic circle") {
  auto s = single_target(0.4, 0.4, 0.4, 0.3);
  const Simulator sim(s);
  WorldState w = sim.initial_state();
  const double omega = 5.0 / 0.4;
  for (int k = 1; k <= 1000; ++k) {
    const StepResult r = sim.step(w);
    const double t = k * s.dt;
    // Counterclockwise circle of radius d.
    const Vec2 expect{0.4 * std::cos(omega * t), 0.4 * std::sin(omega * t)};
    CHECK(distance(r.world.agent_positions[0], expect) < 1e-6 * k * s.dt + 1e-9);
    CHECK(std::abs(r.record.agents[0].tangential_speed - 5.0) < 1e-6);
    w = r.world;
  }
}

TEST_CASE("range rate equals minus the radial velocity") {
  auto s = preset("case1", {"sim.t_end=4", "sim.log_stride=1"});
  const auto res = run(s);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k + 1 < res.telemetry.size(); ++k) {
    const auto& a = res.telemetry[k].agents[0];
    const auto& b = res.telemetry[k + 1].agents[0];
    if (!smooth(a, b)) continue;
    ++used;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      const double fd = (b.targets[i].rho - a.targets[i].rho) / s.dt;
      const double v = 0.5 * (a.targets[i].v + b.targets[i].v);
      worst = std::max(worst, std::abs(fd + v));
    }
  }
  CHECK(used > res.telemetry.size() / 2);
  CHECK(worst < 2 * s.dt);
}

TEST_CASE("estimated target velocity equals ydot + rho_hat_dot phi + rho_hat phi_dot") {
  auto s = preset("case1", {"sim.t_end=4", "sim.log_stride=1"});
  const auto res = run(s);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k + 1 < res.telemetry.size(); ++k) {
    const auto& a = res.telemetry[k].agents[0];
    const auto& b = res.telemetry[k + 1].agents[0];
    if (!smooth(a, b)) continue;
    ++used;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      const Vec2 fd = (b.targets[i].estimate - a.targets[i].estimate) / s.dt;
      const auto rhs = [](const AgentTelemetry& x, std::size_t j) {
        const auto& t = x.targets[j];
        return x.velocity + t.rho_hat_dot * t.phi + t.rho_hat * t.phi_dot;
      };
      const Vec2 model = (rhs(a, i) + rhs(b, i)) * 0.5;
      worst = std::max(worst, distance(fd, model));
    }
  }
  CHECK(used > res.telemetry.size() / 2);
  CHECK(worst < 2 * s.dt);
}

TEST_CASE("numeric bearing rate starts from zero and tracks the analytic rate on smooth segments") {
  auto s = preset("case1", {"sim.t_end=1", "sim.log_stride=1", "params.bearing_rate=numeric"});
  const auto res = run(s);
  CHECK(res.telemetry[0].agents[0].targets[0].phi_dot == Vec2{0, 0});
  // At t = 0.5 the command is smooth; compare against -(vbar / rho) phibar.
  const auto& a = res.telemetry[500].agents[0];
  for (const auto& t : a.targets) {
    const Vec2 phibar{t.phi.y, -t.phi.x};
    const Vec2 exact = phibar * (-t.vbar / t.rho);
    CHECK(distance(exact, t.phi_dot) < 10 * s.dt);
  }
}

TEST_CASE("degenerate single target: the agent orbits at distance d") {
  Scenario s = single_target(3.0, 0.5, 0.4);
  s.t_end = 15.0;
  s.log_stride = 100;
  const auto res = run(s);
  REQUIRE(res.report.completed);
  const auto& last = res.telemetry.back().agents[0];
  CHECK(last.circle_distance == Approx(0.4).epsilon(1e-3));
  CHECK(last.tangential_speed == Approx(5.0).epsilon(1e-3));
  CHECK(res.report.all_passed());
}

TEST_CASE("a run failure returns partial telemetry and the cause") {
  // Agent midway between two targets: the estimated center is the agent itself.
  Scenario s;
  s.name = "at_center";
  s.targets = {{-1, 0}, {1, 0}};
  s.agents = {AgentConfig{{0, 0}, {0.5, 0.5}, 0.4}};
  s.formation.per_agent_d = {0.4};
  s.t_end = 1.0;
  s.warnings = check_assumptions(s);
  const auto res = run(s);
  CHECK_FALSE(res.report.completed);
  REQUIRE(res.report.failure);
  CHECK(res.report.failure->find("center") != std::string::npos);
  CHECK_FALSE(res.report.all_passed());
  REQUIRE(res.report.find("run_completed"));
  CHECK_FALSE(res.report.find("run_completed")->passed);
}

TEST_CASE("an overestimating initial guess is reported by the monitor") {
  const auto s = preset("case1", {"sim.t_end=2", "params.rho_hat0=9"});
  CHECK_FALSE(s.certified());
  const auto res = run(s);
  REQUIRE(res.report.find("estimator_underestimate"));
  CHECK_FALSE(res.report.find("estimator_underestimate")->passed);
}

TEST_CASE("the floor invariant survives an aggressive approach") {
  const auto s = preset("case1", {"sim.t_end=5", "params.h=0.25", "params.rho_hat0=0.25"});
  const auto res = run(s);
  CHECK(res.report.min_floor_margin >= -1e-9);
  CHECK(res.report.find("estimator_floor")->passed);
}

TEST_CASE("telemetry logging stride and final record") {
  const auto s = preset("case1", {"sim.t_end=0.1", "sim.log_stride=7"});
  const auto res = run(s);
  // Steps 0, 7, ..., 98 plus the final observation at step 100.
  CHECK(res.telemetry.size() == 16);
  CHECK(res.telemetry.front().t == 0.0);
  CHECK(res.telemetry.back().step_index == 100);
  CHECK(res.telemetry.back().t == Approx(0.1));
  CHECK(res.final_world.step_index == 100);
}

TEST_CASE("Euler converges at first order away from switching") {
  // Start from the converged orbit so no step or sign function switches in the window.
  const auto s = preset("case1", {"sim.t_end=20"});
  WorldState w = run(s).final_world;
  w.t = 0.0;
  w.step_index = 0;
  const auto final_pos = [&](double dt) {
    Scenario sc = s;
    sc.integrator = Integrator::Euler;
    sc.dt = dt;
    const Simulator sim(sc);
    WorldState x = w;
    for (int k = 0; k < static_cast<int>(std::lround(2.0 / dt)); ++k) x = sim.step(x).world;
    return x.agent_positions[0];
  };
  const Vec2 a = final_pos(4e-3), b = final_pos(2e-3), c = final_pos(1e-3);
  const double order = std::log2(distance(a, b) / distance(b, c));
  CHECK(order == Approx(1.0).epsilon(0.5));
}

TEST_CASE("multi-agent records carry gaps that sum to 2pi") {
  const auto s = preset("case2", {"sim.t_end=1"});
  const auto res = run(s);
  for (const auto& r : res.telemetry) {
    CHECK(std::abs(r.gap_sum - 2 * std::numbers::pi) <= 1e-9);
    CHECK(std::isfinite(r.min_agent_distance));
    for (const auto& a : r.agents) {
      CHECK(a.sigma_plus > 0.0);
      CHECK(a.sigma_plus <= std::numbers::pi + 1e-12);
    }
  }
}

}  // TEST_SUITE
