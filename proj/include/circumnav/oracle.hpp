#pragma once
// Brute-force reference implementations. These deliberately share no code
// with geometry.cpp beyond the Vec2 arithmetic so they can be used to check it.

#include <span>

#include "circumnav/geometry.hpp"

namespace circumnav::oracle {

/// Smallest circle among all pair-diameter circles and triple circumcircles
/// that covers every point. O(n^4); meant for n <= ~30.
Circle min_circle_enumeration(std::span<const Vec2> points);

/// Distance from a to conv(points): zero if a lies in any triangle of input
/// points, else the minimum distance to any segment between two input points.
double hull_distance_enumeration(Vec2 a, std::span<const Vec2> points);

/// Closest point of conv(points) to a, by the same enumeration.
Vec2 hull_projection_enumeration(Vec2 a, std::span<const Vec2> points);

}  // namespace circumnav::oracle
