#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "circumnav/error.hpp"
#include "circumnav/multiagent.hpp"
#include "doctest.h"

using namespace circumnav;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Agent at angle phi on a circle of radius r around c, looking at c.
AgentView on_circle(std::size_t id, Vec2 c, double r, double phi) {
  const Vec2 pos = c + r * UnitVec2::from_angle(phi);
  return {id, pos, wrap_two_pi(phi + kPi), c, r - 0.4};
}

}  // namespace

TEST_SUITE("multiagent") {

TEST_CASE("four evenly spaced agents see quarter turns on both sides") {
  const double r = 4.3;
  std::vector<AgentView> v;
  for (std::size_t i = 0; i < 4; ++i) v.push_back(on_circle(i, {1, 2.5}, r, kPi / 2 * static_cast<double>(i)));
  const double M = 2 * r * std::sin(kPi / 4) + 1e-6;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto g = neighbor_geometry(v, i, M);
    CHECK(g.neighbor_set.size() == 2);  // the diametrically opposite agent is out of range
    CHECK(g.sigma_plus == Approx(kPi / 2));
    CHECK(g.sigma_minus == Approx(kPi / 2));
    REQUIRE(g.i_plus);
    REQUIRE(g.i_minus);
    CHECK(*g.i_plus == (i + 1) % 4);
    CHECK(*g.i_minus == (i + 3) % 4);
  }
  const auto gaps = angular_gaps(v);
  for (double gap : gaps) CHECK(gap == Approx(kPi / 2));
}

TEST_CASE("isolated agent uses the default sigma") {
  std::vector<AgentView> v{on_circle(0, {0, 0}, 3, 0.0), on_circle(1, {0, 0}, 3, kPi)};
  const auto g = neighbor_geometry(v, 0, 1.0);
  CHECK(g.neighbor_set.empty());
  CHECK(g.sigma_plus == kPi);
  CHECK(g.sigma_minus == kPi);
  CHECK(coordination_gain(g.sigma_plus, g.sigma_minus, GainFunction::exponential()) ==
        Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("two diametrically opposite agents") {
  std::vector<AgentView> v{on_circle(0, {0, 0}, 3, 0.0), on_circle(1, {0, 0}, 3, kPi)};
  const auto g = neighbor_geometry(v, 0, 10.0);
  CHECK(g.neighbor_set.size() == 1);
  CHECK(g.sigma_plus == Approx(kPi));
  CHECK(g.sigma_minus == Approx(kPi));
}

TEST_CASE("coincident agents are rejected") {
  std::vector<AgentView> v{on_circle(0, {0, 0}, 3, 0.0), on_circle(1, {0, 0}, 3, 0.0)};
  try {
    (void)neighbor_geometry(v, 0, 10.0);
    FAIL("expected CoincidentAgents");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CoincidentAgents);
  }
}

TEST_CASE("gain function") {
  const auto f = GainFunction::exponential();
  CHECK(f(1.0) == Approx(0.6321).epsilon(1e-4));
  CHECK(coordination_gain(kPi, kPi, f) == Approx(1.0 - std::exp(-1.0)));
  CHECK(coordination_gain(3.0, 1e-3, f) > 0.999);
  CHECK(coordination_gain(1e-3, 3.0, f) < 1e-3);
  CHECK(f(std::numeric_limits<double>::infinity()) == 1.0);
  double prev = 0.0;
  for (double x = 1e-6; x < 50.0; x *= 1.3) {
    const double y = f(x);
    CHECK(y > prev);
    CHECK(y <= 1.0);
    prev = y;
  }
}

TEST_CASE("equilibrium commands pure tangential motion of magnitude f(1) alpha") {
  const ControlParams p{5, 5, 0.3, 0.4};
  FormationParams fp;
  fp.per_agent_d = {0.4, 0.4, 0.4, 0.4};
  const double r_t = 3.9, r = r_t + 0.4;
  std::vector<AgentView> v;
  for (std::size_t i = 0; i < 4; ++i) v.push_back(on_circle(i, {0, 0}, r, kPi / 2 * static_cast<double>(i)));
  for (std::size_t i = 0; i < 4; ++i) {
    CircumnavState s;
    s.circle = {{0, 0}, r_t};
    s.rho_hat_c = r;
    s.phi_hat = UnitVec2::from_angle(v[i].theta);
    s.r_hat = r;
    const Vec2 cmd = multi_control_input(s, neighbor_geometry(v, i, 8.0), p, fp, i);
    CHECK(dot(s.phi_hat, cmd) == Approx(0.0));
    CHECK(cmd.norm() == Approx((1.0 - std::exp(-1.0)) * 5.0));
  }
}

TEST_CASE("the agent behind the largest gap moves faster than the agent ahead of it") {
  const ControlParams p{5, 5, 0.3, 0.4};
  FormationParams fp;
  fp.per_agent_d = {0.4, 0.4, 0.4};
  const double r_t = 2.0, r = r_t + 0.4;
  // Agents at 0, 0.5 and 2.0 rad: the gap ahead of agent 2 (to 2pi) is the largest.
  const std::vector<double> angles{0.0, 0.5, 2.0};
  std::vector<AgentView> v;
  for (std::size_t i = 0; i < 3; ++i) v.push_back(on_circle(i, {0, 0}, r, angles[i]));
  std::vector<double> speed;
  for (std::size_t i = 0; i < 3; ++i) {
    CircumnavState s;
    s.circle = {{0, 0}, r_t};
    s.rho_hat_c = r;
    s.phi_hat = UnitVec2::from_angle(v[i].theta);
    s.r_hat = r;
    speed.push_back(multi_control_input(s, neighbor_geometry(v, i, 100.0), p, fp, i).norm());
  }
  const auto gaps = angular_gaps(v);
  CHECK(gaps[2] == Approx(2 * kPi - 2.0));
  // Agent 0 is the one ahead of agent 2 across the largest gap.
  CHECK(speed[2] > speed[0]);
}

TEST_CASE("radius scaling") {
  FormationParams fp;
  fp.per_agent_d = {0.4, 0.8};
  CircumnavState s;
  s.circle = {{0, 0}, 2.0};
  s.r_hat = 2.8;
  CHECK(radius_scale(s, fp) == Approx(2.8 / 2.4));
  fp.radius_scaling = RadiusScaling::Raw;
  CHECK(radius_scale(s, fp) == Approx(2.8));
}

TEST_CASE("angular gaps") {
  std::vector<AgentView> one{on_circle(0, {0, 0}, 1, 1.0)};
  CHECK(angular_gaps(one) == std::vector<double>{2 * kPi});

  std::vector<AgentView> two{on_circle(0, {0, 0}, 1, 0.0), on_circle(1, {0, 0}, 1, kPi / 2)};
  const auto g = angular_gaps(two);
  CHECK(g[0] == Approx(kPi / 2));
  CHECK(g[1] == Approx(3 * kPi / 2));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<AgentView> v;
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    for (std::size_t i = 0; i < n; ++i) v.push_back(on_circle(i, {0.3, -1}, 2, u(rng)));
    double sum = 0.0;
    for (double gap : angular_gaps(v)) {
      CHECK(gap >= 0.0);
      CHECK(gap < 2 * kPi);
      sum += gap;
    }
    CHECK(std::abs(sum - 2 * kPi) <= 1e-9);
  }
}

}  // TEST_SUITE
