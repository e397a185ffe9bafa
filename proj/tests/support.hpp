#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "circumnav/geometry.hpp"

namespace testing {

using circumnav::Vec2;

inline std::vector<Vec2> random_points(std::mt19937_64& rng, std::size_t n, double lo = -100.0, double hi = 100.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return pts;
}

// Distance from p to the segment ab by explicit parametrization; independent
// of geometry.cpp.
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace testing
