#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "plateau/field.hpp"
#include "plateau/sheet.hpp"

namespace plateau {

/// Outcome of one numerical lemma check. worst_margin is signed so that a
/// positive value means the inequality is violated (log scale for the
/// exponential bounds, relative for area checks).
struct LemmaReport {
  std::string lemma;
  long tested = 0;
  long violations = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  double value = 0.0;  // fitted or measured statistic (K, Q, ratio, ...)
  bool hypothesis_met = true;
  std::vector<std::pair<std::string, double>> params;
  std::string note;

  bool passed() const { return violations == 0; }
};

/// Exact distance from every grid node to the mesh (min over triangles).
std::vector<double> node_distances(const Grid& grid, const TriangleMesh& mesh);

/// 1 - u <= slack * exp(-9 d / (80 eps)) at nodes with d >= 10 eps.
/// eta0 only sets hypothesis_met (11 eps < eta0/4).
LemmaReport decay_profile(const PhaseField& u, const TriangleMesh& mesh, double eps,
                          double eta0 = std::numeric_limits<double>::infinity(), double slack = 1.1);
LemmaReport decay_profile(const PhaseField& u, const HomotopySheet& sheet, double eps,
                          double eta0 = std::numeric_limits<double>::infinity(), double slack = 1.1);

/// Central-difference gradient at interior nodes. K is the max of eps*|grad u|
/// on the shell 11 eps <= d < 11 eps + 2h; beyond the shell the envelope
/// (K/eps) exp(-9 (d - 11 eps)/(80 eps)) * slack is asserted. value = K.
LemmaReport gradient_decay(const PhaseField& u, const TriangleMesh& mesh, double eps,
                           double eta0 = std::numeric_limits<double>::infinity(), double slack = 1.1);
LemmaReport gradient_decay(const PhaseField& u, const HomotopySheet& sheet, double eps,
                           double eta0 = std::numeric_limits<double>::infinity(), double slack = 1.1);

/// Q = max |u(x) - u(y)| / |x - y|^alpha over `pairs` seeded random node pairs
/// plus every axis-neighbour pair. value = Q.
LemmaReport holder_quotient(const PhaseField& u, double alpha, long pairs, std::uint64_t seed);

/// Normalized quotient Q eps^alpha / (1 + lambda / c_eps).
double holder_normalized(double q, double eps, double alpha, double lambda, double c_eps);

/// Scaling check between two solves: normalized quotients within `factor`.
LemmaReport holder_scaling(double q_coarse, double eps_coarse, double c_coarse, double q_fine, double eps_fine,
                           double c_fine, double alpha, double lambda, double factor = 3.0);

struct SheetSequence {
  std::string generator;
  std::vector<int> index;  // n for each term
  std::vector<HomotopySheet> terms;
  HomotopySheet limit;
  std::vector<double> sup_distance;
  double lambda = 0.0;  // shared Lipschitz bound
};

struct AnnulusSpec {
  double r_inner = 0.5;
  double r_outer = 1.0;
  int M = 32;
  int K = 256;
};

HomotopySheet flat_annulus(const AnnulusSpec& a, double lambda_cap);

/// Annulus in z = 0 plus (1/n) sin(n theta) sin(pi t) e_z, n = 1..count.
SheetSequence wrinkle_sequence(const AnnulusSpec& a, int count);

/// Annulus plus a cos^2 bump of height 1/n and radius 1/n at (mid radius, 0, 0).
SheetSequence bump_sequence(const AnnulusSpec& a, int count);

/// Recomputes sup distances and the shared Lipschitz bound; throws BadSequence
/// if a term's rings differ from the limit or the distances increase.
void finalize_sequence(SheetSequence& seq);

struct TestBall {
  Vec3 center;
  double radius;
};

/// Ten balls of radius 0.15 (times the annulus width / 0.5) centred on the
/// mid circle of the annulus.
std::vector<TestBall> annulus_test_balls(const AnnulusSpec& a);

/// Exact area of mesh inside the closed ball (plane-section disk clipping).
double ball_area_exact(const TriangleMesh& mesh, const Vec3& center, double r);

/// Exact area of the intersection of triangle (a, b, c) with the closed ball.
double triangle_ball_area(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& center, double r);

/// Tail (last half) areas against the limit, globally and on each ball, with
/// relative slack; plus the uniform bound area <= lambda^2 pi on every term.
LemmaReport lsc_harness(const SheetSequence& seq, const std::vector<TestBall>& balls, double slack = 0.005);

struct Disk {
  Vec3 center;
  double radius;
  Vec3 normal;
};

inline constexpr double kCoverageC = 3.0;

/// Fraction of D(center, (1 - C eta) r) covered by the orthogonal projection
/// of nearby triangles, rasterized at r/256. Throws HypothesisUnmet if a
/// vertex projecting into the disk lies farther than eta r from its plane.
double disk_coverage(const TriangleMesh& mesh, const Disk& disk, double eta, double C = kCoverageC);
double disk_coverage(const HomotopySheet& sheet, const Disk& disk, double eta, double C = kCoverageC);

/// mu_n(closed B(x0, r(1 + C eta))) / (pi r^2) >= (1 - C eta)^2 - slack at each
/// point, eta = sup distance / r.
LemmaReport density_check(const HomotopySheet& term, double sup_distance, const std::vector<Vec3>& points,
                          double r, double C = kCoverageC, double slack = 0.02);

/// count seeded random points on the flat annulus with radius in [lo, hi].
std::vector<Vec3> annulus_points(double lo, double hi, int count, std::uint64_t seed);

}  // namespace plateau
