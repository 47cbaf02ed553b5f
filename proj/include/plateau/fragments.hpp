#pragma once

#include <cmath>

#include "plateau/geometry.hpp"

namespace plateau {

/// Smallest level L with diameter / 2^L < threshold.
inline int subdivision_level(double diameter, double threshold) {
  int level = 0;
  double d = diameter;
  while (d >= threshold && level < 30) {
    d *= 0.5;
    ++level;
  }
  return level;
}

inline double triangle_diameter(const Vec3& a, const Vec3& b, const Vec3& c) {
  return std::sqrt(std::max({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()}));
}

/// Visits the 4^level congruent fragments of the uniform subdivision of
/// triangle (a, b, c). The callback receives the barycentric coordinates of
/// each fragment centroid with respect to (a, b, c); every fragment has area
/// area(a, b, c) / 4^level.
template <class F>
void for_each_fragment_centroid(int level, F&& visit) {
  const int n = 1 << level;
  const double inv = 1.0 / (3.0 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      // upward fragment (i,j),(i+1,j),(i,j+1)
      const double b1 = (3 * i + 1) * inv;
      const double b2 = (3 * j + 1) * inv;
      visit(1.0 - b1 - b2, b1, b2);
      if (i + j + 2 <= n) {
        const double c1 = (3 * i + 2) * inv;
        const double c2 = (3 * j + 2) * inv;
        visit(1.0 - c1 - c2, c1, c2);
      }
    }
  }
}

}  // namespace plateau
