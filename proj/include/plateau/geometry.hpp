#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <variant>
#include <vector>

namespace plateau {

using Vec3 = Eigen::Vector3d;

struct Box {
  Vec3 lo;
  Vec3 hi;
};

struct Ball {
  Vec3 center;
  double radius = 0.0;
};

// The convex set C0 the sheet must stay in.
using ConvexRegion = std::variant<Ball, Box>;

struct DomainSpec {
  Box outer;
  ConvexRegion inner;
};

/// Container box C, inner convex region C0 and the gap eta0 between their
/// boundaries. Immutable once built.
struct Domain {
  Box outer_box;
  ConvexRegion inner_region;
  double eta0 = 0.0;
};

Domain make_domain(const DomainSpec& spec);

/// Closest point of the closed region.
Vec3 project_into(const ConvexRegion& region, const Vec3& p);

/// Signed distance to the region boundary (negative inside).
double signed_distance(const ConvexRegion& region, const Vec3& p);

bool contains(const ConvexRegion& region, const Vec3& p, double tol);
bool contains(const Box& box, const Vec3& p, double tol);

struct CircleCurve {
  Vec3 center;
  double radius = 0.0;
  Vec3 axis = Vec3::UnitZ();
};

struct PolylineCurve {
  std::vector<Vec3> points;  // closed, no repeated endpoint
};

using CurveSpec = std::variant<CircleCurve, PolylineCurve>;

using Ring = std::vector<Vec3>;

/// K points equally spaced in the curve parameter. Circles are sampled
/// starting from the in-plane direction closest to +x, turning positively
/// about the axis.
Ring sample_curve(const CurveSpec& curve, int K);

/// Throws BadCurveSpec unless every sample lies on the boundary of `region`
/// within `tol`.
void require_on_boundary(const ConvexRegion& region, const Ring& ring, double tol = 1e-9);

/// Rejects rings that come within `tol` of each other, unless they are the
/// same ring (the degenerate configuration gamma0 == gamma1 is legal).
void require_separated(const Ring& a, const Ring& b, double tol = 1e-6);

}  // namespace plateau
