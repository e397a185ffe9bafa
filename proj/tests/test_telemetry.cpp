#include <algorithm>
#include <sstream>
#include <string>

#include "circumnav/scenario.hpp"
#include "circumnav/sim.hpp"
#include "circumnav/svg_plot.hpp"
#include "circumnav/telemetry.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace circumnav;

namespace {
const std::string kPresets = CIRCUMNAV_PRESET_DIR;
}

TEST_SUITE("telemetry") {

TEST_CASE("csv header and rows") {
  const std::vector<std::string> ov{"sim.t_end=0.05"};
  const auto s = load_scenario_file(kPresets + "/case2.yaml", ov);
  const auto res = run(s);
  std::ostringstream out;
  write_telemetry_csv(out, s, res.telemetry);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  const auto cols = telemetry_columns(s);
  CHECK(cols.size() == 1 + 4 * (14 + 4 * 9) + 2);
  CHECK(header.rfind("t,a0_x,a0_y,a0_vx,a0_vy,a0_D,", 0) == 0);
  CHECK(header.find("a3_t3_yhat,min_agent_dist,gap_sum") != std::string::npos);

  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) == cols.size() - 1);
  }
  CHECK(rows == res.telemetry.size());
  // 9 significant digits.
  CHECK(out.str().find(",5.57086015,") != std::string::npos);
}

TEST_CASE("report json schema") {
  const std::vector<std::string> ov{"sim.t_end=0.05"};
  const auto s = load_scenario_file(kPresets + "/case1.yaml", ov);
  const auto res = run(s);
  const auto j = nlohmann::json::parse(report_to_json(res.report, s));
  CHECK(j["schema_version"] == 1);
  CHECK(j["scenario"] == "case1");
  CHECK(j["certified"] == true);
  CHECK(j["completed"] == true);
  CHECK(j["failure"].is_null());
  CHECK(j["run"]["integrator"] == "rk4");
  CHECK(j["metrics"].contains("min_hull_distance"));
  CHECK(j["metrics"]["t_conv"].is_null());
  // Single agent: no inter-agent distance.
  CHECK(j["metrics"]["min_agent_distance"].is_null());
  CHECK(j["invariants"].is_array());
  CHECK(j["invariants"][0]["name"] == "safety");
}

TEST_CASE("svg output is deterministic") {
  const std::vector<std::string> ov{"sim.t_end=0.5"};
  const auto s = load_scenario_file(kPresets + "/case2.yaml", ov);
  const Simulator sim(s);
  const auto a = sim.run();
  const auto b = sim.run();
  CHECK(plot_trajectory(sim, a.telemetry) == plot_trajectory(sim, b.telemetry));
  CHECK(plot_gaps(sim, a.telemetry) == plot_gaps(sim, b.telemetry));
  const auto svg = plot_distance(sim, a.telemetry);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(plot_speed(sim, a.telemetry).find("polyline") != std::string::npos);
  CHECK(plot_errors(sim, a.telemetry).find("a2 t3") != std::string::npos);
}

}  // TEST_SUITE
