#include "circumnav/telemetry.hpp"

#include <cmath>

#include <fmt/format.h>

#include "json.hpp"

namespace circumnav {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

constexpr const char* kAgentColumns[] = {"x",         "y",     "vx",         "vy",         "D",
                                         "circle_dist", "tangential_speed", "est_cx", "est_cy", "est_r",
                                         "rho_hat_c", "gap",   "sigma_plus", "sigma_minus"};
constexpr const char* kTargetColumns[] = {"rho", "rho_hat", "rho_tilde", "rho_hat_dot", "v",
                                          "vbar", "omega",  "xhat",      "yhat"};

}  // namespace

std::vector<std::string> telemetry_columns(const Scenario& scenario) {
  std::vector<std::string> cols{"t"};
  for (std::size_t a = 0; a < scenario.agents.size(); ++a) {
    for (const char* c : kAgentColumns) cols.push_back(fmt::format("a{}_{}", a, c));
    for (std::size_t i = 0; i < scenario.targets.size(); ++i)
      for (const char* c : kTargetColumns) cols.push_back(fmt::format("a{}_t{}_{}", a, i, c));
  }
  cols.emplace_back("min_agent_dist");
  cols.emplace_back("gap_sum");
  return cols;
}

void write_telemetry_csv(std::ostream& out, const Scenario& scenario, std::span<const TelemetryRecord> records) {
  const auto cols = telemetry_columns(scenario);
  out << fmt::format("{}\n", fmt::join(cols, ","));

  fmt::memory_buffer row;
  const auto put = [&](double v) { fmt::format_to(std::back_inserter(row), ",{:.9g}", v); };
  for (const auto& r : records) {
    row.clear();
    fmt::format_to(std::back_inserter(row), "{:.9g}", r.t);
    for (const auto& a : r.agents) {
      for (double v : {a.position.x, a.position.y, a.velocity.x, a.velocity.y, a.hull_distance, a.circle_distance,
                       a.tangential_speed, a.est_center.x, a.est_center.y, a.est_radius, a.rho_hat_c, a.gap,
                       a.sigma_plus, a.sigma_minus}) {
        put(v);
      }
      for (const auto& t : a.targets) {
        for (double v : {t.rho, t.rho_hat, t.rho_tilde, t.rho_hat_dot, t.v, t.vbar, t.omega, t.estimate.x,
                         t.estimate.y}) {
          put(v);
        }
      }
    }
    put(r.min_agent_distance);
    put(r.gap_sum);
    row.push_back('\n');
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

std::string report_to_json(const InvariantReport& report, const Scenario& scenario) {
  ordered_json j;
  j["schema_version"] = InvariantReport::kSchemaVersion;
  j["scenario"] = report.scenario;
  j["certified"] = report.certified;
  j["warnings"] = report.warnings;
  j["completed"] = report.completed;
  j["failure"] = report.failure ? ordered_json(*report.failure) : ordered_json(nullptr);
  j["all_passed"] = report.all_passed();

  ordered_json cfg;
  cfg["agents"] = scenario.agents.size();
  cfg["targets"] = scenario.targets.size();
  cfg["dt"] = scenario.dt;
  cfg["t_end"] = scenario.t_end;
  cfg["integrator"] = to_string(scenario.integrator);
  cfg["bearing_rate"] = to_string(scenario.estimator.bearing_rate_mode);
  cfg["log_stride"] = scenario.log_stride;
  cfg["seed"] = scenario.seed;
  j["run"] = cfg;

  ordered_json m;
  m["t_final"] = report.t_final;
  m["steps"] = report.steps;
  m["min_hull_distance"] = number(report.min_hull_distance);
  m["max_rho_tilde"] = number(report.max_rho_tilde);
  m["min_floor_margin"] = number(report.min_floor_margin);
  m["worst_monotone_drop"] = number(report.worst_monotone_drop);
  m["final_distance_error"] = number(report.final_distance_error);
  m["final_speed_error"] = number(report.final_speed_error);
  m["final_max_abs_rho_tilde"] = number(report.final_max_abs_rho_tilde);
  m["t_conv"] = report.t_conv ? number(*report.t_conv) : ordered_json(nullptr);
  m["final_gap_spread"] = number(report.final_gap_spread);
  m["max_gap_sum_error"] = number(report.max_gap_sum_error);
  m["min_agent_distance"] = number(report.min_agent_distance);
  j["metrics"] = m;

  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", number(c.value)},
                      {"threshold", number(c.threshold)},
                      {"detail", c.detail}});
  }
  j["invariants"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace circumnav
