#include "circumnav/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "circumnav/error.hpp"

namespace circumnav {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

struct Series {
  std::string label;
  std::vector<Vec2> points;
  bool dashed{false};
};

struct Bounds {
  double x0{std::numeric_limits<double>::infinity()};
  double x1{-std::numeric_limits<double>::infinity()};
  double y0{std::numeric_limits<double>::infinity()};
  double y1{-std::numeric_limits<double>::infinity()};

  void add(Vec2 p) {
    if (!p.is_finite()) return;
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  void finish(bool equal_aspect) {
    if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
    if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
    x0 -= px, x1 += px, y0 -= py, y1 += py;
    if (equal_aspect) {
      const double sx = (x1 - x0) / (kWidth - 2 * kMargin);
      const double sy = (y1 - y0) / (kHeight - 2 * kMargin);
      const double s = std::max(sx, sy);
      const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      x0 = cx - 0.5 * s * (kWidth - 2 * kMargin);
      x1 = cx + 0.5 * s * (kWidth - 2 * kMargin);
      y0 = cy - 0.5 * s * (kHeight - 2 * kMargin);
      y1 = cy + 0.5 * s * (kHeight - 2 * kMargin);
    }
  }
};

class Canvas {
 public:
  Canvas(std::string title, std::string xlabel, std::string ylabel, Bounds b)
      : b_(b) {
    fmt::format_to(out(), R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)"
                          "\n",
                   kWidth, kHeight, kWidth, kHeight);
    fmt::format_to(out(), R"(<rect width="100%" height="100%" fill="white"/>)" "\n");
    fmt::format_to(out(), R"(<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>)"
                          "\n",
                   kWidth / 2, title);
    fmt::format_to(out(),
                   R"(<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>)"
                   "\n",
                   kWidth / 2, kHeight - 8, xlabel);
    fmt::format_to(out(),
                   R"svg(<text x="14" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" )svg"
                   R"svg(transform="rotate(-90 14 {})">{}</text>)svg"
                   "\n",
                   kHeight / 2, kHeight / 2, ylabel);
    fmt::format_to(out(), R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)" "\n",
                   kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
    for (int i = 0; i <= 4; ++i) {
      const double fx = b_.x0 + (b_.x1 - b_.x0) * i / 4.0;
      const double fy = b_.y0 + (b_.y1 - b_.y0) * i / 4.0;
      fmt::format_to(out(),
                     R"(<text x="{:.2f}" y="{:.2f}" text-anchor="middle" font-family="sans-serif" font-size="10">{:.3g}</text>)"
                     "\n",
                     sx(fx), kHeight - kMargin + 14, fx);
      fmt::format_to(out(),
                     R"(<text x="{:.2f}" y="{:.2f}" text-anchor="end" font-family="sans-serif" font-size="10">{:.3g}</text>)"
                     "\n",
                     kMargin - 4, sy(fy) + 3, fy);
    }
  }

  void polyline(const std::vector<Vec2>& pts, const char* stroke, bool dashed = false) {
    if (pts.empty()) return;
    fmt::format_to(out(), R"(<polyline fill="none" stroke="{}" stroke-width="1.2"{} points=")", stroke,
                   dashed ? R"( stroke-dasharray="5,4")" : "");
    for (const auto& p : pts) {
      if (p.is_finite()) fmt::format_to(out(), "{:.2f},{:.2f} ", sx(p.x), sy(p.y));
    }
    fmt::format_to(out(), "\"/>\n");
  }

  void polygon(const std::vector<Vec2>& pts, const char* stroke) {
    fmt::format_to(out(), R"(<polygon fill="#eeeeee" stroke="{}" points=")", stroke);
    for (const auto& p : pts) fmt::format_to(out(), "{:.2f},{:.2f} ", sx(p.x), sy(p.y));
    fmt::format_to(out(), "\"/>\n");
  }

  void marker(Vec2 p, const char* fill, double r = 3.0) {
    fmt::format_to(out(), R"(<circle cx="{:.2f}" cy="{:.2f}" r="{}" fill="{}"/>)" "\n", sx(p.x), sy(p.y), r, fill);
  }

  void legend(std::size_t i, const std::string& label, const char* stroke) {
    const double y = kMargin + 12 + 14 * static_cast<double>(i);
    const double x = kWidth - kMargin - 110;
    fmt::format_to(out(), R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>)" "\n", x, y - 4,
                   x + 16, y - 4, stroke);
    fmt::format_to(out(), R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">{}</text>)" "\n", x + 20, y,
                   label);
  }

  std::string finish() {
    fmt::format_to(out(), "</svg>\n");
    return fmt::to_string(buf_);
  }

 private:
  std::back_insert_iterator<fmt::memory_buffer> out() { return std::back_inserter(buf_); }
  [[nodiscard]] double sx(double x) const { return kMargin + (x - b_.x0) / (b_.x1 - b_.x0) * (kWidth - 2 * kMargin); }
  [[nodiscard]] double sy(double y) const {
    return kHeight - kMargin - (y - b_.y0) / (b_.y1 - b_.y0) * (kHeight - 2 * kMargin);
  }

  Bounds b_;
  fmt::memory_buffer buf_;
};

std::string time_chart(const std::string& title, const std::string& ylabel, std::vector<Series> series) {
  Bounds b;
  for (const auto& s : series)
    for (const auto& p : s.points) b.add(p);
  b.finish(false);
  Canvas c(title, "t [s]", ylabel, b);
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.polyline(series[i].points, series[i].dashed ? "#555555" : color(i), series[i].dashed);
    if (i < 12) c.legend(i, series[i].label, series[i].dashed ? "#555555" : color(i));
  }
  return c.finish();
}

std::vector<Vec2> per_agent(std::span<const TelemetryRecord> records, std::size_t a,
                            const std::function<double(const AgentTelemetry&)>& f) {
  std::vector<Vec2> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.emplace_back(r.t, f(r.agents[a]));
  return pts;
}

std::vector<Vec2> constant(std::span<const TelemetryRecord> records, double v) {
  if (records.empty()) return {};
  return {{records.front().t, v}, {records.back().t, v}};
}

double agent_d(const Scenario& s, std::size_t a) { return s.agents[a].d; }

}  // namespace

std::string plot_trajectory(const Simulator& sim, std::span<const TelemetryRecord> records) {
  const auto& s = sim.scenario();
  const Circle& circle = sim.target_circle();
  Bounds b;
  for (const auto& t : s.targets) b.add(t);
  for (const auto& r : records)
    for (const auto& a : r.agents) b.add(a.position);
  double max_d = 0.0;
  for (std::size_t a = 0; a < s.agents.size(); ++a) max_d = std::max(max_d, agent_d(s, a));
  const double outer = circle.radius + max_d;
  b.add(circle.center + Vec2{outer, outer});
  b.add(circle.center - Vec2{outer, outer});
  b.finish(true);

  Canvas c("Trajectories", "x", "y", b);
  c.polygon(sim.target_hull().vertices(), "#999999");
  std::vector<Vec2> ring;
  for (int k = 0; k <= 180; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 180.0;
    ring.push_back(circle.center + Vec2{std::cos(th), std::sin(th)} * circle.radius);
  }
  c.polyline(ring, "#555555", true);
  for (const auto& t : s.targets) c.marker(t, "black", 3.5);
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    std::vector<Vec2> path;
    path.reserve(records.size());
    for (const auto& r : records) path.push_back(r.agents[a].position);
    c.polyline(path, color(a));
    if (!path.empty()) {
      c.marker(path.front(), color(a), 2.5);
      c.marker(path.back(), color(a), 4.0);
    }
    if (a < 12) c.legend(a, fmt::format("agent {}", a), color(a));
  }
  return c.finish();
}

std::string plot_distance(const Simulator& sim, std::span<const TelemetryRecord> records) {
  const auto& s = sim.scenario();
  std::vector<Series> series;
  for (std::size_t a = 0; a < s.agents.size(); ++a)
    series.push_back({fmt::format("agent {}", a), per_agent(records, a, [](const auto& x) { return x.circle_distance; })});
  for (std::size_t a = 0; a < s.agents.size(); ++a)
    series.push_back({fmt::format("d{}", a), constant(records, agent_d(s, a)), true});
  return time_chart("Distance to minimum circle", "rho - r_t", std::move(series));
}

std::string plot_speed(const Simulator& sim, std::span<const TelemetryRecord> records) {
  const auto& s = sim.scenario();
  std::vector<Series> series;
  for (std::size_t a = 0; a < s.agents.size(); ++a)
    series.push_back(
        {fmt::format("agent {}", a), per_agent(records, a, [](const auto& x) { return x.tangential_speed; })});
  for (std::size_t a = 0; a < s.agents.size(); ++a)
    series.push_back({fmt::format("expected {}", a), constant(records, sim.expected_speed(a)), true});
  return time_chart("Tangential speed", "speed", std::move(series));
}

std::string plot_errors(const Simulator& sim, std::span<const TelemetryRecord> records) {
  const auto& s = sim.scenario();
  std::vector<Series> series;
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
      std::vector<Vec2> pts;
      pts.reserve(records.size());
      for (const auto& r : records) pts.emplace_back(r.t, r.agents[a].targets[i].rho_tilde);
      series.push_back({fmt::format("a{} t{}", a, i), std::move(pts)});
    }
  }
  return time_chart("Range estimation error", "rho_tilde", std::move(series));
}

std::string plot_gaps(const Simulator& sim, std::span<const TelemetryRecord> records) {
  const auto& s = sim.scenario();
  std::vector<Series> series;
  for (std::size_t a = 0; a < s.agents.size(); ++a)
    series.push_back({fmt::format("agent {}", a), per_agent(records, a, [](const auto& x) { return x.gap; })});
  series.push_back(
      {"2pi/n", constant(records, 2.0 * std::numbers::pi / static_cast<double>(s.agents.size())), true});
  return time_chart("Angular gaps", "gap [rad]", std::move(series));
}

std::vector<std::filesystem::path> write_plots(const std::filesystem::path& dir, const Simulator& sim,
                                               std::span<const TelemetryRecord> records) {
  const std::pair<const char*, std::string> charts[] = {
      {"trajectory.svg", plot_trajectory(sim, records)}, {"distance.svg", plot_distance(sim, records)},
      {"speed.svg", plot_speed(sim, records)},           {"errors.svg", plot_errors(sim, records)},
      {"gaps.svg", plot_gaps(sim, records)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, body] : charts) {
    const auto path = dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::InvalidArgument, fmt::format("cannot write {}", path.string()));
    f << body;
    written.push_back(path);
  }
  return written;
}

}  // namespace circumnav
