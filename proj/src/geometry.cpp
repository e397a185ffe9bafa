#include "circumnav/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

#include "circumnav/error.hpp"

namespace circumnav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(std::span<const Vec2> points) {
  for (const auto& p : points) {
    if (!p.is_finite()) throw Error(Errc::InvalidArgument, "non-finite point");
  }
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

}  // namespace

UnitVec2 UnitVec2::normalize(Vec2 v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(Errc::InvalidArgument, "cannot normalize zero or non-finite vector");
  return UnitVec2(v.x / n, v.y / n);
}

UnitVec2 UnitVec2::from_components(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x * x + y * y - 1.0) > kEps) {
    throw Error(Errc::InvalidArgument, "components are not unit length");
  }
  return UnitVec2(x, y);
}

ConvexPolygon::Kind ConvexPolygon::kind() const {
  if (vertices_.size() <= 1) return Kind::Point;
  if (vertices_.size() == 2) return Kind::Segment;
  return Kind::Polygon;
}

bool ConvexPolygon::contains(Vec2 p) const {
  if (kind() != Kind::Polygon) return false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::from_ccw_vertices(std::vector<Vec2> vertices) {
  if (vertices.empty()) throw Error(Errc::EmptyPointSet, "polygon needs at least one vertex");
  return ConvexPolygon(std::move(vertices));
}

ConvexPolygon convex_hull(std::span<const Vec2> points) {
  if (points.empty()) throw Error(Errc::EmptyPointSet, "convex hull of empty set");
  require_finite(points);

  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Vec2> unique;
  unique.reserve(pts.size());
  for (const auto& p : pts) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](Vec2 q) { return distance(p, q) <= kDedupEps; });
    if (!dup) unique.push_back(p);
  }
  if (unique.size() <= 2) return ConvexPolygon::from_ccw_vertices(std::move(unique));

  // Andrew's monotone chain; popping on cross <= 0 drops collinear vertices.
  std::vector<Vec2> hull(2 * unique.size());
  std::size_t k = 0;
  for (const auto& p : unique) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = unique.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = unique[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return ConvexPolygon::from_ccw_vertices(std::move(hull));
}

Vec2 prj_to_hull(Vec2 a, const ConvexPolygon& hull) {
  const auto& v = hull.vertices();
  switch (hull.kind()) {
    case ConvexPolygon::Kind::Point: return v.front();
    case ConvexPolygon::Kind::Segment: return closest_on_segment(a, v[0], v[1]);
    case ConvexPolygon::Kind::Polygon: break;
  }
  if (hull.contains(a)) return a;
  Vec2 best = v.front();
  double best_d2 = (best - a).squared_norm();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = closest_on_segment(a, v[i], v[(i + 1) % n]);
    const double d2 = (q - a).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = q;
    }
  }
  return best;
}

double dist_to_hull(Vec2 a, const ConvexPolygon& hull) { return distance(prj_to_hull(a, hull), a); }

UnitVec2 uv_to_hull(Vec2 a, const ConvexPolygon& hull) {
  const Vec2 p = prj_to_hull(a, hull);
  const double d = distance(p, a);
  if (d <= kEps) throw Error(Errc::PointNotOutside, "point is inside or on the hull");
  return UnitVec2::normalize((p - a) / d);
}

Circle circle_from_diameter(Vec2 a, Vec2 b) { return {(a + b) * 0.5, distance(a, b) * 0.5}; }

Circle circle_from_triple(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double det = cross(ab, ac);
  if (std::abs(det) < kCollinearEps) {
    const double dab = distance(a, b);
    const double dac = distance(a, c);
    const double dbc = distance(b, c);
    if (dab >= dac && dab >= dbc) return circle_from_diameter(a, b);
    if (dac >= dbc) return circle_from_diameter(a, c);
    return circle_from_diameter(b, c);
  }
  const double ab2 = ab.squared_norm();
  const double ac2 = ac.squared_norm();
  const Vec2 offset{(ac.y * ab2 - ab.y * ac2) / (2.0 * det), (ab.x * ac2 - ac.x * ab2) / (2.0 * det)};
  const Vec2 center = a + offset;
  // Radius as the max over the three vertices keeps all of them covered
  // despite rounding in the center.
  const double r = std::max({distance(center, a), distance(center, b), distance(center, c)});
  return {center, r};
}

EnclosingCircle min_enclosing_circle(std::span<const Vec2> points, std::uint64_t shuffle_seed) {
  if (points.empty()) throw Error(Errc::EmptyPointSet, "minimum circle of empty set");
  require_finite(points);

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(shuffle_seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto pt = [&](std::size_t k) { return points[order[k]]; };

  EnclosingCircle out;
  out.circle = {pt(0), 0.0};
  out.support = {{order[0], 0, 0}, 1};
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (out.circle.contains(pt(i))) continue;
    out.circle = {pt(i), 0.0};
    out.support = {{order[i], 0, 0}, 1};
    for (std::size_t j = 0; j < i; ++j) {
      if (out.circle.contains(pt(j))) continue;
      out.circle = circle_from_diameter(pt(i), pt(j));
      out.support = {{order[i], order[j], 0}, 2};
      for (std::size_t k = 0; k < j; ++k) {
        if (out.circle.contains(pt(k))) continue;
        const Vec2 a = pt(i), b = pt(j), c = pt(k);
        out.circle = circle_from_triple(a, b, c);
        if (std::abs(cross(b - a, c - a)) < kCollinearEps) {
          // Collinear: keep the pair the fallback diameter was built from.
          const double dab = distance(a, b), dac = distance(a, c), dbc = distance(b, c);
          if (dab >= dac && dab >= dbc) {
            out.support = {{order[i], order[j], 0}, 2};
          } else if (dac >= dbc) {
            out.support = {{order[i], order[k], 0}, 2};
          } else {
            out.support = {{order[j], order[k], 0}, 2};
          }
        } else {
          out.support = {{order[i], order[j], order[k]}, 3};
        }
      }
    }
  }
  return out;
}

UnitVec2 rotate_cw_90(UnitVec2 v) { return UnitVec2::from_components(v.y(), -v.x()); }
Vec2 rotate_cw_90(Vec2 v) { return {v.y, -v.x}; }

double angle_between(UnitVec2 u, UnitVec2 v) { return std::acos(std::clamp(dot(u, v), -1.0, 1.0)); }

ExtremeVectors extreme_unit_vectors(std::span<const UnitVec2> vs) {
  if (vs.empty()) throw Error(Errc::EmptyPointSet, "no unit vectors");
  if (vs.size() == 1) return {vs[0], vs[0]};

  std::vector<std::pair<double, std::size_t>> angles;
  angles.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) angles.emplace_back(wrap_two_pi(vs[i].angle()), i);
  std::sort(angles.begin(), angles.end());

  // The complement of the largest circular gap is the occupied sweep.
  std::size_t gap_end = 0;
  double max_gap = angles.front().first + kTwoPi - angles.back().first;
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double gap = angles[i].first - angles[i - 1].first;
    if (gap > max_gap) {
      max_gap = gap;
      gap_end = i;
    }
  }
  if (kTwoPi - max_gap >= std::numbers::pi - kCollinearEps) {
    throw Error(Errc::NoHalfPlane, "unit vectors are not contained in an open half-plane");
  }
  const std::size_t gap_start = (gap_end + angles.size() - 1) % angles.size();
  return {vs[angles[gap_end].second], vs[angles[gap_start].second]};
}

double wrap_two_pi(double a) {
  double r = a - kTwoPi * std::floor(a / kTwoPi);
  if (r >= kTwoPi) r -= kTwoPi;
  if (r < 0.0) r += kTwoPi;
  return r;
}

double wrap_pi(double a) {
  double r = a - kTwoPi * std::floor((a + std::numbers::pi) / kTwoPi);
  if (r >= std::numbers::pi) r -= kTwoPi;
  if (r < -std::numbers::pi) r += kTwoPi;
  return r;
}

}  // namespace circumnav
