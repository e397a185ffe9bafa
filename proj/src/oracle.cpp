#include "circumnav/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "circumnav/error.hpp"

namespace circumnav::oracle {

namespace {

constexpr double kCoverTol = 1e-7;

// Intersection of the perpendicular bisectors of ab and ac via Cramer's rule.
std::optional<Circle> circumcircle(Vec2 a, Vec2 b, Vec2 c) {
  const double a11 = 2.0 * (b.x - a.x), a12 = 2.0 * (b.y - a.y);
  const double a21 = 2.0 * (c.x - a.x), a22 = 2.0 * (c.y - a.y);
  const double r1 = b.x * b.x - a.x * a.x + b.y * b.y - a.y * a.y;
  const double r2 = c.x * c.x - a.x * a.x + c.y * c.y - a.y * a.y;
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-9) return std::nullopt;
  const Vec2 center{(r1 * a22 - r2 * a12) / det, (a11 * r2 - a21 * r1) / det};
  return Circle{center, std::hypot(center.x - a.x, center.y - a.y)};
}

bool covers(const Circle& c, std::span<const Vec2> points) {
  const double tol = kCoverTol * std::max(1.0, c.radius);
  return std::all_of(points.begin(), points.end(),
                     [&](Vec2 p) { return std::hypot(p.x - c.center.x, p.y - c.center.y) <= c.radius + tol; });
}

bool in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  if (cross(b - a, c - a) == 0.0) return false;
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

Vec2 segment_foot(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return {a.x + t * ab.x, a.y + t * ab.y};
}

}  // namespace

Circle min_circle_enumeration(std::span<const Vec2> points) {
  if (points.empty()) throw Error(Errc::EmptyPointSet, "oracle: empty point set");
  const std::size_t n = points.size();
  Circle best{points[0], std::numeric_limits<double>::infinity()};
  if (covers({points[0], 0.0}, points)) return {points[0], 0.0};

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 mid{(points[i].x + points[j].x) / 2.0, (points[i].y + points[j].y) / 2.0};
      const Circle c{mid, std::hypot(points[i].x - points[j].x, points[i].y - points[j].y) / 2.0};
      if (c.radius < best.radius && covers(c, points)) best = c;
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto cc = circumcircle(points[i], points[j], points[k]);
        if (cc && cc->radius < best.radius && covers(*cc, points)) best = *cc;
      }
    }
  }
  return best;
}

Vec2 hull_projection_enumeration(Vec2 a, std::span<const Vec2> points) {
  if (points.empty()) throw Error(Errc::EmptyPointSet, "oracle: empty point set");
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (in_triangle(a, points[i], points[j], points[k])) return a;

  Vec2 best = points[0];
  double best_d = std::hypot(a.x - best.x, a.y - best.y);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Vec2 q = segment_foot(a, points[i], points[j]);
      const double d = std::hypot(a.x - q.x, a.y - q.y);
      if (d < best_d) {
        best_d = d;
        best = q;
      }
    }
  }
  return best;
}

double hull_distance_enumeration(Vec2 a, std::span<const Vec2> points) {
  const Vec2 q = hull_projection_enumeration(a, points);
  return std::hypot(a.x - q.x, a.y - q.y);
}

}  // namespace circumnav::oracle
