#include "plateau/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "plateau/error.hpp"

namespace plateau {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Vec3 box_center(const Box& b) { return 0.5 * (b.lo + b.hi); }

// Orthonormal in-plane frame for a circle: e1 is the projection of +x (or +y
// when the axis is nearly parallel to x), e2 = axis x e1.
std::pair<Vec3, Vec3> circle_frame(const Vec3& axis) {
  const Vec3 a = axis.normalized();
  Vec3 ref = Vec3::UnitX();
  if (std::abs(a.dot(ref)) > 0.9) ref = Vec3::UnitY();
  const Vec3 e1 = (ref - ref.dot(a) * a).normalized();
  return {e1, a.cross(e1)};
}

}  // namespace

Domain make_domain(const DomainSpec& spec) {
  const Box& outer = spec.outer;
  for (int d = 0; d < 3; ++d) {
    if (!(outer.hi[d] > outer.lo[d])) {
      throw Error(ErrorKind::ContainmentViolation, "outer box has non-positive extent");
    }
  }
  const double eta0 = std::visit(
      overloaded{
          [&](const Ball& b) {
            if (!(b.radius > 0.0)) {
              throw Error(ErrorKind::ContainmentViolation, "inner ball radius must be positive");
            }
            double gap = std::numeric_limits<double>::infinity();
            for (int d = 0; d < 3; ++d) {
              gap = std::min({gap, b.center[d] - outer.lo[d], outer.hi[d] - b.center[d]});
            }
            return gap - b.radius;
          },
          [&](const Box& b) {
            double gap = std::numeric_limits<double>::infinity();
            for (int d = 0; d < 3; ++d) {
              if (!(b.hi[d] > b.lo[d])) {
                throw Error(ErrorKind::ContainmentViolation, "inner box has non-positive extent");
              }
              gap = std::min({gap, b.lo[d] - outer.lo[d], outer.hi[d] - b.hi[d]});
            }
            return gap;
          },
      },
      spec.inner);
  if (!(eta0 > 0.0)) {
    throw Error(ErrorKind::ContainmentViolation,
                "inner region closure not inside outer box (eta0 = " + std::to_string(eta0) + ")");
  }
  return Domain{outer, spec.inner, eta0};
}

Vec3 project_into(const ConvexRegion& region, const Vec3& p) {
  return std::visit(overloaded{
                        [&](const Ball& b) -> Vec3 {
                          const Vec3 d = p - b.center;
                          const double n = d.norm();
                          if (n <= b.radius) return p;
                          return b.center + d * (b.radius / n);
                        },
                        [&](const Box& b) -> Vec3 { return p.cwiseMax(b.lo).cwiseMin(b.hi); },
                    },
                    region);
}

double signed_distance(const ConvexRegion& region, const Vec3& p) {
  return std::visit(overloaded{
                        [&](const Ball& b) { return (p - b.center).norm() - b.radius; },
                        [&](const Box& b) {
                          const Vec3 c = box_center(b);
                          const Vec3 half = 0.5 * (b.hi - b.lo);
                          const Vec3 q = (p - c).cwiseAbs() - half;
                          const double outside = q.cwiseMax(0.0).norm();
                          const double inside = std::min(q.maxCoeff(), 0.0);
                          return outside + inside;
                        },
                    },
                    region);
}

bool contains(const ConvexRegion& region, const Vec3& p, double tol) {
  return signed_distance(region, p) <= tol;
}

bool contains(const Box& box, const Vec3& p, double tol) {
  for (int d = 0; d < 3; ++d) {
    if (p[d] < box.lo[d] - tol || p[d] > box.hi[d] + tol) return false;
  }
  return true;
}

Ring sample_curve(const CurveSpec& curve, int K) {
  return std::visit(
      overloaded{
          [&](const CircleCurve& c) {
            if (K < 3) throw Error(ErrorKind::BadCurveSpec, "need at least 3 samples");
            if (!(c.radius > 0.0)) throw Error(ErrorKind::BadCurveSpec, "circle radius must be positive");
            if (!(c.axis.norm() > 0.0)) throw Error(ErrorKind::BadCurveSpec, "circle axis must be nonzero");
            const auto [e1, e2] = circle_frame(c.axis);
            Ring ring(static_cast<std::size_t>(K));
            for (int j = 0; j < K; ++j) {
              const double theta = 2.0 * std::numbers::pi * j / K;
              ring[j] = c.center + c.radius * (std::cos(theta) * e1 + std::sin(theta) * e2);
            }
            return ring;
          },
          [&](const PolylineCurve& poly) {
            const int n = static_cast<int>(poly.points.size());
            if (n < 3) throw Error(ErrorKind::BadCurveSpec, "polyline needs at least 3 points");
            if (K < 3) throw Error(ErrorKind::BadCurveSpec, "need at least 3 samples");
            if ((poly.points.front() - poly.points.back()).norm() == 0.0) {
              throw Error(ErrorKind::BadCurveSpec, "polyline repeats its first point");
            }
            // Parameter s in [0, n), one unit per segment.
            Ring ring(static_cast<std::size_t>(K));
            for (int j = 0; j < K; ++j) {
              const double s = static_cast<double>(n) * j / K;
              const int seg = std::min(static_cast<int>(std::floor(s)), n - 1);
              const double f = s - seg;
              const Vec3& a = poly.points[seg];
              const Vec3& b = poly.points[(seg + 1) % n];
              ring[j] = f == 0.0 ? a : Vec3((1.0 - f) * a + f * b);
            }
            return ring;
          },
      },
      curve);
}

void require_on_boundary(const ConvexRegion& region, const Ring& ring, double tol) {
  for (std::size_t j = 0; j < ring.size(); ++j) {
    const double d = std::abs(signed_distance(region, ring[j]));
    if (d > tol) {
      throw Error(ErrorKind::BadCurveSpec, "curve sample " + std::to_string(j) +
                                               " is off the inner-region boundary by " +
                                               std::to_string(d));
    }
  }
}

void require_separated(const Ring& a, const Ring& b, double tol) {
  if (a.size() == b.size()) {
    bool same = true;
    for (std::size_t j = 0; j < a.size() && same; ++j) same = (a[j] - b[j]).norm() <= tol;
    if (same) return;
  }
  for (const Vec3& p : a) {
    for (const Vec3& q : b) {
      if ((p - q).norm() < tol) {
        throw Error(ErrorKind::CurvesIntersect, "boundary curves come within " + std::to_string(tol));
      }
    }
  }
}

}  // namespace plateau
