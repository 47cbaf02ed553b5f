#pragma once

#include <vector>

#include "plateau/sheet.hpp"

namespace plateau {

/// Exact Euclidean distance from p to the closed triangle (a, b, c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Axis-aligned bounding-volume hierarchy over a triangle mesh answering
/// exact nearest-distance queries.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  /// Exact distance to the nearest triangle; +inf for an empty mesh.
  double distance(const Vec3& p) const;

 private:
  struct Node {
    Vec3 lo, hi;
    int left = -1, right = -1;  // children, or -1 for a leaf
    int begin = 0, end = 0;     // leaf range into order_
  };

  int build(int begin, int end);
  static double box_distance2(const Node& n, const Vec3& p);

  const TriangleMesh* mesh_;
  std::vector<int> order_;
  std::vector<Vec3> lo_, hi_, centroid_;
  std::vector<Node> nodes_;
};

/// Uniform bucket grid of triangles for ball-range queries.
class TriangleBuckets {
 public:
  TriangleBuckets(const TriangleMesh& mesh, double cell);

  /// Calls visit(triangle_index) for every triangle whose bounding box
  /// meets the box around the ball. Each triangle is visited once.
  template <class F>
  void for_each_near(const Vec3& center, double r, F&& visit) const;

 private:
  Vec3 lo_;
  double cell_;
  int n_[3];
  std::vector<int> start_;
  std::vector<int> items_;
  std::vector<Vec3> tri_lo_, tri_hi_;
  double pad_ = 0.0;
};

template <class F>
void TriangleBuckets::for_each_near(const Vec3& center, double r, F&& visit) const {
  int b0[3], b1[3];
  for (int d = 0; d < 3; ++d) {
    b0[d] = std::max(0, static_cast<int>(std::floor((center[d] - r - pad_ - lo_[d]) / cell_)));
    b1[d] = std::min(n_[d] - 1, static_cast<int>(std::floor((center[d] + r + pad_ - lo_[d]) / cell_)));
  }
  for (int z = b0[2]; z <= b1[2]; ++z)
    for (int y = b0[1]; y <= b1[1]; ++y)
      for (int x = b0[0]; x <= b1[0]; ++x) {
        const int b = x + n_[0] * (y + n_[1] * z);
        for (int k = start_[b]; k < start_[b + 1]; ++k) {
          const int t = items_[k];
          bool hit = true;
          for (int d = 0; d < 3 && hit; ++d) {
            hit = tri_lo_[t][d] <= center[d] + r && tri_hi_[t][d] >= center[d] - r;
          }
          if (hit) visit(t);
        }
      }
}

}  // namespace plateau
