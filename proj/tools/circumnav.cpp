// circumnav: run scenarios and spot-check the geometry against brute force.
//
//   circumnav run <scenario> [--override k=v]... [--output-dir DIR] [--plot] [--verify]
//   circumnav oracle mincircle "(x,y) (x,y) ..."
//   circumnav oracle hulldist "(x,y)" [--points "(x,y) ..."]
//
// Exit codes: 0 success, 1 runtime or input error, 2 invariant failure under --verify.
// CIRCUMNAV_OUTPUT_DIR sets the default output directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "circumnav/error.hpp"
#include "circumnav/geometry.hpp"
#include "circumnav/oracle.hpp"
#include "circumnav/scenario.hpp"
#include "circumnav/sim.hpp"
#include "circumnav/svg_plot.hpp"
#include "circumnav/telemetry.hpp"

namespace fs = std::filesystem;
using namespace circumnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvariant = 2;

const std::vector<Vec2> kCase1Targets = {{-2, 0}, {4, 5}, {2, 0}, {1, 1}};

struct RunSpec {
  std::string scenario_path;
  std::string output_dir;
  std::vector<std::string> overrides;
  bool plot{false};
  bool verify{false};
};

fs::path resolve_scenario(const std::string& arg) {
  const fs::path p(arg);
  std::vector<fs::path> candidates{p, fs::path(arg + ".yaml")};
  if (!p.has_parent_path() || p.parent_path() == "presets") {
    candidates.push_back(fs::path(CIRCUMNAV_PRESET_DIR) / p.filename());
    candidates.push_back(fs::path(CIRCUMNAV_PRESET_DIR) / (p.filename().string() + ".yaml"));
  }
  for (const auto& c : candidates) {
    if (fs::is_regular_file(c)) return c;
  }
  throw Error(Errc::InvalidArgument, fmt::format("scenario file '{}' not found", arg));
}

fs::path output_dir(const RunSpec& spec, const Scenario& scenario) {
  if (!spec.output_dir.empty()) return spec.output_dir;
  if (const char* env = std::getenv("CIRCUMNAV_OUTPUT_DIR"); env && *env) return fs::path(env) / scenario.name;
  return fs::path("circumnav_out") / scenario.name;
}

int cmd_run(const RunSpec& spec) {
  const Scenario scenario = load_scenario_file(resolve_scenario(spec.scenario_path), spec.overrides);
  for (const auto& w : scenario.warnings) std::cerr << "warning: " << w << "\n";
  if (!scenario.certified()) std::cerr << "warning: run is not certified (standing assumptions violated)\n";

  const Simulator sim(scenario);
  const RunResult result = sim.run();

  const fs::path dir = output_dir(spec, scenario);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "telemetry.csv", std::ios::binary);
    if (!csv) throw Error(Errc::InvalidArgument, fmt::format("cannot write {}", (dir / "telemetry.csv").string()));
    write_telemetry_csv(csv, scenario, result.telemetry);
  }
  {
    std::ofstream json(dir / "report.json", std::ios::binary);
    if (!json) throw Error(Errc::InvalidArgument, fmt::format("cannot write {}", (dir / "report.json").string()));
    json << report_to_json(result.report, scenario);
  }
  if (spec.plot) write_plots(dir, sim, result.telemetry);

  const auto& r = result.report;
  fmt::print("scenario {}: t_final={:.6g} steps={} certified={}\n", r.scenario, r.t_final, r.steps, r.certified);
  if (r.failure) fmt::print("run failed: {}\n", *r.failure);
  for (const auto& c : r.checks) {
    fmt::print("  {:<24} {}  value={:.6g} threshold={:.6g}{}\n", c.name, c.passed ? "ok  " : "FAIL", c.value,
               c.threshold, c.detail.empty() ? "" : "  (" + c.detail + ")");
  }
  fmt::print("outputs written to {}\n", dir.string());

  if (r.failure && !spec.verify) return kExitError;
  if (spec.verify && !r.all_passed()) return kExitInvariant;
  return kExitOk;
}

std::vector<Vec2> parse_points(const std::string& text) {
  static const std::regex point(R"(\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\))");
  std::vector<Vec2> out;
  std::string rest;
  auto it = std::sregex_iterator(text.begin(), text.end(), point);
  std::size_t consumed = 0;
  for (; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    rest += text.substr(consumed, static_cast<std::size_t>(m.position()) - consumed);
    consumed = static_cast<std::size_t>(m.position() + m.length());
    std::size_t nx = 0, ny = 0;
    double x = 0, y = 0;
    try {
      x = std::stod(m[1].str(), &nx);
      y = std::stod(m[2].str(), &ny);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, fmt::format("malformed point '{}'", m.str()));
    }
    if (nx != m[1].str().size() || ny != m[2].str().size() || !std::isfinite(x) || !std::isfinite(y)) {
      throw Error(Errc::InvalidArgument, fmt::format("malformed point '{}'", m.str()));
    }
    out.emplace_back(x, y);
  }
  rest += text.substr(consumed);
  if (rest.find_first_not_of(" \t\n,;") != std::string::npos) {
    throw Error(Errc::InvalidArgument, fmt::format("cannot parse points from '{}'", text));
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, "no points given");
  return out;
}

int cmd_mincircle(const std::string& text) {
  const auto pts = parse_points(text);
  const auto fast = min_enclosing_circle(pts);
  const auto brute = oracle::min_circle_enumeration(pts);
  fmt::print("{:<10} {:>14} {:>14} {:>14}\n", "", "center.x", "center.y", "radius");
  fmt::print("{:<10} {:>14.9g} {:>14.9g} {:>14.9g}\n", "oracle", brute.center.x, brute.center.y, brute.radius);
  fmt::print("{:<10} {:>14.9g} {:>14.9g} {:>14.9g}\n", "fast", fast.circle.center.x, fast.circle.center.y,
             fast.circle.radius);
  fmt::print("{:<10} {:>14.3g} {:>14.3g} {:>14.3g}\n", "diff", fast.circle.center.x - brute.center.x,
             fast.circle.center.y - brute.center.y, fast.circle.radius - brute.radius);
  std::string support;
  for (auto i : fast.support.view()) support += fmt::format(" ({:g},{:g})", pts[i].x, pts[i].y);
  fmt::print("support:{}\n", support);
  return kExitOk;
}

int cmd_hulldist(const std::string& query, const std::string& points_text) {
  const auto q = parse_points(query);
  if (q.size() != 1) throw Error(Errc::InvalidArgument, "hulldist expects exactly one query point");
  const auto pts = points_text.empty() ? kCase1Targets : parse_points(points_text);
  const auto hull = convex_hull(pts);
  const double fast = dist_to_hull(q[0], hull);
  const Vec2 fast_prj = prj_to_hull(q[0], hull);
  const double brute = oracle::hull_distance_enumeration(q[0], pts);
  const Vec2 brute_prj = oracle::hull_projection_enumeration(q[0], pts);
  fmt::print("{:<10} {:>14} {:>14} {:>14}\n", "", "distance", "prj.x", "prj.y");
  fmt::print("{:<10} {:>14.9g} {:>14.9g} {:>14.9g}\n", "oracle", brute, brute_prj.x, brute_prj.y);
  fmt::print("{:<10} {:>14.9g} {:>14.9g} {:>14.9g}\n", "fast", fast, fast_prj.x, fast_prj.y);
  fmt::print("{:<10} {:>14.3g} {:>14.3g} {:>14.3g}\n", "diff", fast - brute, fast_prj.x - brute_prj.x,
             fast_prj.y - brute_prj.y);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-only localization and minimum-circle circumnavigation simulator"};
  app.require_subcommand(1);

  RunSpec spec;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write telemetry.csv and report.json");
  run->add_option("scenario", spec.scenario_path, "Scenario file (.yaml may be omitted; bare names look in presets/)")
      ->required();
  run->add_option("--override,-o", spec.overrides, "Dotted-key override, e.g. params.d=0.5 or agents.1.d=0.8");
  run->add_option("--output-dir", spec.output_dir,
                  "Output directory (default: $CIRCUMNAV_OUTPUT_DIR/<name> or circumnav_out/<name>)");
  run->add_flag("--plot", spec.plot, "Also write trajectory/distance/speed/errors/gaps SVG charts");
  run->add_flag("--verify", spec.verify, "Exit with code 2 if any invariant check fails");

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare the fast geometry against brute-force enumeration");
  oracle_cmd->require_subcommand(1);
  std::string mc_points;
  auto* mincircle = oracle_cmd->add_subcommand("mincircle", "Minimum enclosing circle");
  mincircle->add_option("points", mc_points, "Points as \"(x,y) (x,y) ...\"")->required();
  std::string hd_query, hd_points;
  auto* hulldist = oracle_cmd->add_subcommand("hulldist", "Distance from a point to a convex hull");
  hulldist->add_option("point", hd_query, "Query point as \"(x,y)\"")->required();
  hulldist->add_option("--points", hd_points, "Hull points (default: the case1 targets)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run) return cmd_run(spec);
    if (*mincircle) return cmd_mincircle(mc_points);
    if (*hulldist) return cmd_hulldist(hd_query, hd_points);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
