#include "plateau/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace plateau {

namespace {

// Closest point on a triangle (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Degenerate triangle: fall back to the nearest edge point.
    auto seg = [&](const Vec3& s, const Vec3& t) {
      const Vec3 st = t - s;
      const double l2 = st.squaredNorm();
      const double u = l2 > 0.0 ? std::clamp((p - s).dot(st) / l2, 0.0, 1.0) : 0.0;
      return Vec3(s + u * st);
    };
    Vec3 best = seg(a, b);
    for (const Vec3& q : {seg(b, c), seg(c, a)}) {
      if ((q - p).squaredNorm() < (best - p).squaredNorm()) best = q;
    }
    return best;
  }
  const double v = vb / denom, w = vc / denom;
  return a + ab * v + ac * w;
}

}  // namespace

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  return (closest_point_on_triangle(p, a, b, c) - p).norm();
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) : mesh_(&mesh) {
  const int n = static_cast<int>(mesh.triangles.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  lo_.resize(n);
  hi_.resize(n);
  centroid_.resize(n);
  for (int t = 0; t < n; ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    lo_[t] = a.cwiseMin(b).cwiseMin(c);
    hi_[t] = a.cwiseMax(b).cwiseMax(c);
    centroid_[t] = (a + b + c) / 3.0;
  }
  if (n > 0) {
    nodes_.reserve(2 * n);
    build(0, n);
  }
}

int TriangleBvh::build(int begin, int end) {
  Node node;
  node.lo = lo_[order_[begin]];
  node.hi = hi_[order_[begin]];
  for (int k = begin + 1; k < end; ++k) {
    node.lo = node.lo.cwiseMin(lo_[order_[k]]);
    node.hi = node.hi.cwiseMax(hi_[order_[k]]);
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  constexpr int kLeafSize = 4;
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  int axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int x, int y) {
                     if (centroid_[x][axis] != centroid_[y][axis]) return centroid_[x][axis] < centroid_[y][axis];
                     return x < y;
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double TriangleBvh::box_distance2(const Node& n, const Vec3& p) {
  const Vec3 d = (n.lo - p).cwiseMax(p - n.hi).cwiseMax(0.0);
  return d.squaredNorm();
}

double TriangleBvh::distance(const Vec3& p) const {
  if (nodes_.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    if (box_distance2(n, p) >= best * best) continue;
    if (n.left < 0) {
      for (int k = n.begin; k < n.end; ++k) {
        const auto& tri = mesh_->triangles[order_[k]];
        best = std::min(best, point_triangle_distance(p, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
                                                      mesh_->vertices[tri[2]]));
      }
      continue;
    }
    const double dl = box_distance2(nodes_[n.left], p);
    const double dr = box_distance2(nodes_[n.right], p);
    // Push the farther child first so the nearer one is explored first.
    if (dl < dr) {
      stack[top++] = n.right;
      stack[top++] = n.left;
    } else {
      stack[top++] = n.left;
      stack[top++] = n.right;
    }
  }
  return best;
}

TriangleBuckets::TriangleBuckets(const TriangleMesh& mesh, double cell) : cell_(cell) {
  const int nt = static_cast<int>(mesh.triangles.size());
  tri_lo_.resize(nt);
  tri_hi_.resize(nt);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  std::vector<Vec3> centroid(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    tri_lo_[t] = a.cwiseMin(b).cwiseMin(c);
    tri_hi_[t] = a.cwiseMax(b).cwiseMax(c);
    centroid[t] = (a + b + c) / 3.0;
    pad_ = std::max(pad_, (tri_hi_[t] - tri_lo_[t]).maxCoeff());
    lo = lo.cwiseMin(centroid[t]);
    hi = hi.cwiseMax(centroid[t]);
  }
  if (nt == 0) {
    lo = hi = Vec3::Zero();
  }
  lo_ = lo;
  for (int d = 0; d < 3; ++d) n_[d] = std::max(1, static_cast<int>(std::floor((hi[d] - lo[d]) / cell_)) + 1);
  const std::size_t nb = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  std::vector<int> bucket(nt);
  start_.assign(nb + 1, 0);
  for (int t = 0; t < nt; ++t) {
    int idx[3];
    for (int d = 0; d < 3; ++d) {
      idx[d] = std::clamp(static_cast<int>(std::floor((centroid[t][d] - lo_[d]) / cell_)), 0, n_[d] - 1);
    }
    bucket[t] = idx[0] + n_[0] * (idx[1] + n_[1] * idx[2]);
    ++start_[bucket[t] + 1];
  }
  for (std::size_t b = 0; b < nb; ++b) start_[b + 1] += start_[b];
  items_.resize(nt);
  std::vector<int> fill(start_.begin(), start_.end() - 1);
  for (int t = 0; t < nt; ++t) items_[fill[bucket[t]]++] = t;
}

}  // namespace plateau
