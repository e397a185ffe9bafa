#pragma once
/**
 * @file geometry.hpp
 * @brief Planar geometry used by the circumnavigation stack.
 *
 * Convex hulls, point-to-hull distance/projection queries and minimum
 * enclosing circles. Everything here is a pure function of its arguments.
 *
 * Tolerances:
 *   - kEps (1e-9) is used for containment and "is outside" decisions.
 *   - Points closer than kDedupEps (1e-12) are merged before hull building.
 *   - Triples with |orientation determinant| < kCollinearEps (1e-12) are
 *     treated as collinear by the circle construction.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace circumnav {

inline constexpr double kEps = 1e-9;
inline constexpr double kDedupEps = 1e-12;
inline constexpr double kCollinearEps = 1e-12;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  [[nodiscard]] double norm() const { return std::hypot(x, y); }
  [[nodiscard]] constexpr double squared_norm() const { return x * x + y * y; }
  [[nodiscard]] bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product; > 0 when b is counterclockwise of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Unit-norm direction. Besides the default (1, 0), only the checked factories construct one.
class UnitVec2 {
 public:
  /// (1, 0)
  UnitVec2() = default;

  /// Normalizes v. Throws Errc::InvalidArgument for zero or non-finite input.
  static UnitVec2 normalize(Vec2 v);
  /// Wraps components that are already unit length (checked within 1e-9).
  static UnitVec2 from_components(double x, double y);
  static UnitVec2 from_angle(double radians) { return UnitVec2(std::cos(radians), std::sin(radians)); }

  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] double y() const { return y_; }
  [[nodiscard]] Vec2 vec() const { return {x_, y_}; }
  /// Angle w.r.t. the global x axis in (-pi, pi].
  [[nodiscard]] double angle() const { return std::atan2(y_, x_); }

  bool operator==(const UnitVec2&) const = default;

 private:
  UnitVec2(double x, double y) : x_(x), y_(y) {}
  double x_{1.0};
  double y_{0.0};
};

inline double dot(UnitVec2 a, UnitVec2 b) { return a.x() * b.x() + a.y() * b.y(); }
inline double dot(UnitVec2 a, Vec2 b) { return a.x() * b.x + a.y() * b.y; }
inline Vec2 operator*(double s, UnitVec2 u) { return u.vec() * s; }

struct Circle {
  Vec2 center;
  double radius{0.0};

  [[nodiscard]] bool contains(Vec2 p, double eps = kEps) const {
    return distance(center, p) <= radius + eps;
  }
};

/// Indices into the input list that pin down a minimum enclosing circle:
/// two points (diameter) or three points (circumcircle). A single index is
/// returned only when every input point coincides.
struct SupportSet {
  std::array<std::size_t, 3> indices{};
  std::size_t count{0};

  [[nodiscard]] std::span<const std::size_t> view() const { return {indices.data(), count}; }
};

/// Convex polygon with strictly convex CCW vertices. One vertex means a
/// point-degenerate hull, two vertices a segment-degenerate one.
class ConvexPolygon {
 public:
  enum class Kind { Point, Segment, Polygon };

  ConvexPolygon() = default;

  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] std::size_t size() const { return vertices_.size(); }
  [[nodiscard]] Kind kind() const;
  /// True when p is inside or on the boundary (polygon kind only; exact sign test).
  [[nodiscard]] bool contains(Vec2 p) const;

  /// Builds from vertices already known to be strictly convex and CCW.
  static ConvexPolygon from_ccw_vertices(std::vector<Vec2> vertices);

 private:
  explicit ConvexPolygon(std::vector<Vec2> v) : vertices_(std::move(v)) {}
  std::vector<Vec2> vertices_;
};

ConvexPolygon convex_hull(std::span<const Vec2> points);

double dist_to_hull(Vec2 a, const ConvexPolygon& hull);
Vec2 prj_to_hull(Vec2 a, const ConvexPolygon& hull);
/// Unit vector from a towards its projection on the hull. Throws
/// Errc::PointNotOutside when dist_to_hull(a, hull) <= kEps.
UnitVec2 uv_to_hull(Vec2 a, const ConvexPolygon& hull);

struct EnclosingCircle {
  Circle circle;
  SupportSet support;
};

/// Randomized incremental (move-to-front) minimum enclosing circle.
/// `shuffle_seed` only changes the insertion order, never the result.
EnclosingCircle min_enclosing_circle(std::span<const Vec2> points, std::uint64_t shuffle_seed = 0x5eedULL);

/// Circle having segment ab as its diameter.
Circle circle_from_diameter(Vec2 a, Vec2 b);
/// Circumcircle of a, b, c; falls back to the diameter circle of the extreme
/// pair when the triple is (nearly) collinear.
Circle circle_from_triple(Vec2 a, Vec2 b, Vec2 c);

UnitVec2 rotate_cw_90(UnitVec2 v);
Vec2 rotate_cw_90(Vec2 v);
/// Unsigned angle in [0, pi].
double angle_between(UnitVec2 u, UnitVec2 v);

struct ExtremeVectors {
  UnitVec2 rightmost;
  UnitVec2 leftmost;
};

/// Angular extremes of a set of directions contained in an open half-plane.
/// Every input lies in the CCW sweep from `rightmost` to `leftmost`.
/// Throws Errc::NoHalfPlane when the angular spread is >= pi.
ExtremeVectors extreme_unit_vectors(std::span<const UnitVec2> vs);

/// Wraps to [0, 2pi).
double wrap_two_pi(double a);
/// Wraps to [-pi, pi).
double wrap_pi(double a);

}  // namespace circumnav
