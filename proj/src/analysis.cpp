#include "plateau/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "plateau/error.hpp"
#include "plateau/reduce.hpp"
#include "plateau/spatial.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRate = 9.0 / 80.0;

void add_common(LemmaReport& r, double eps, double eta0) {
  r.params.emplace_back("eps", eps);
  if (std::isfinite(eta0)) {
    r.params.emplace_back("eta0", eta0);
    r.hypothesis_met = 11.0 * eps < eta0 / 4.0;
  }
}

}  // namespace

std::vector<double> node_distances(const Grid& grid, const TriangleMesh& mesh) {
  std::vector<double> d(grid.node_count(), std::numeric_limits<double>::infinity());
  if (mesh.triangles.empty()) return d;
  const TriangleBvh bvh(mesh);
  const int nz = grid.nz(), ny = grid.ny(), nx = grid.nx();
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) d[grid.index(i, j, k)] = bvh.distance(grid.node(i, j, k));
    }
  }
  return d;
}

LemmaReport decay_profile(const PhaseField& u, const TriangleMesh& mesh, double eps, double eta0, double slack) {
  LemmaReport r;
  r.lemma = "decay";
  add_common(r, eps, eta0);
  r.params.emplace_back("slack", slack);
  const std::vector<double> d = node_distances(u.grid, mesh);
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (!(d[n] >= 10.0 * eps)) continue;
    ++r.tested;
    const double gap = 1.0 - u.values[n];
    const double bound = slack * std::exp(-kRate * d[n] / eps);
    if (gap > bound) ++r.violations;
    if (gap > 0.0) r.worst_margin = std::max(r.worst_margin, std::log(gap) + kRate * d[n] / eps - std::log(slack));
  }
  return r;
}

LemmaReport decay_profile(const PhaseField& u, const HomotopySheet& sheet, double eps, double eta0, double slack) {
  return decay_profile(u, to_mesh(sheet), eps, eta0, slack);
}

LemmaReport gradient_decay(const PhaseField& u, const TriangleMesh& mesh, double eps, double eta0, double slack) {
  LemmaReport r;
  r.lemma = "gradient_decay";
  add_common(r, eps, eta0);
  r.params.emplace_back("slack", slack);
  const Grid& g = u.grid;
  const std::vector<double> d = node_distances(g, mesh);
  std::vector<double> grad(g.node_count(), -1.0);  // -1: no central difference
  for (int k = 1; k < g.dims[2]; ++k) {
    for (int j = 1; j < g.dims[1]; ++j) {
      for (int i = 1; i < g.dims[0]; ++i) {
        const auto& v = u.values;
        const Vec3 gv((v[g.index(i + 1, j, k)] - v[g.index(i - 1, j, k)]),
                      (v[g.index(i, j + 1, k)] - v[g.index(i, j - 1, k)]),
                      (v[g.index(i, j, k + 1)] - v[g.index(i, j, k - 1)]));
        grad[g.index(i, j, k)] = gv.norm() / (2.0 * g.h);
      }
    }
  }
  const double shell = 11.0 * eps;
  double K = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (grad[n] >= 0.0 && d[n] >= shell && d[n] < shell + 2.0 * g.h) K = std::max(K, eps * grad[n]);
  }
  r.value = K;
  r.params.emplace_back("K", K);
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (grad[n] < 0.0 || !(d[n] >= shell)) continue;
    ++r.tested;
    const double envelope = slack * (K / eps) * std::exp(-kRate * (d[n] - shell) / eps);
    if (grad[n] > envelope) ++r.violations;
    if (grad[n] > 0.0) {
      r.worst_margin = std::max(r.worst_margin, std::log(grad[n]) - std::log(envelope));
    }
  }
  return r;
}

LemmaReport gradient_decay(const PhaseField& u, const HomotopySheet& sheet, double eps, double eta0,
                           double slack) {
  return gradient_decay(u, to_mesh(sheet), eps, eta0, slack);
}

LemmaReport holder_quotient(const PhaseField& u, double alpha, long pairs, std::uint64_t seed) {
  LemmaReport r;
  r.lemma = "holder";
  r.params.emplace_back("alpha", alpha);
  r.params.emplace_back("pairs", static_cast<double>(pairs));
  const Grid& g = u.grid;
  const long n = static_cast<long>(g.node_count());
  auto node_of = [&](long idx) {
    const int i = static_cast<int>(idx % g.nx());
    const int j = static_cast<int>((idx / g.nx()) % g.ny());
    const int k = static_cast<int>(idx / (static_cast<long>(g.nx()) * g.ny()));
    return g.node(i, j, k);
  };

  std::vector<std::pair<long, long>> sample(pairs);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(0, n - 1);
  for (auto& p : sample) {
    do {
      p = {pick(rng), pick(rng)};
    } while (p.first == p.second);
  }

  double q = 0.0;
#pragma omp parallel for reduction(max : q) schedule(static)
  for (long s = 0; s < pairs; ++s) {
    const auto [a, b] = sample[s];
    const double dist = (node_of(a) - node_of(b)).norm();
    q = std::max(q, std::abs(u.values[a] - u.values[b]) / std::pow(dist, alpha));
  }
  const double hscale = std::pow(g.h, alpha);
#pragma omp parallel for reduction(max : q) schedule(static)
  for (int k = 0; k < g.nz(); ++k) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const double v = u.values[g.index(i, j, k)];
        if (i + 1 < g.nx()) q = std::max(q, std::abs(u.values[g.index(i + 1, j, k)] - v) / hscale);
        if (j + 1 < g.ny()) q = std::max(q, std::abs(u.values[g.index(i, j + 1, k)] - v) / hscale);
        if (k + 1 < g.nz()) q = std::max(q, std::abs(u.values[g.index(i, j, k + 1)] - v) / hscale);
      }
    }
  }
  r.tested = pairs + 3 * n;
  r.value = q;
  return r;
}

double holder_normalized(double q, double eps, double alpha, double lambda, double c_eps) {
  return q * std::pow(eps, alpha) / (1.0 + lambda / c_eps);
}

LemmaReport holder_scaling(double q_coarse, double eps_coarse, double c_coarse, double q_fine, double eps_fine,
                           double c_fine, double alpha, double lambda, double factor) {
  LemmaReport r;
  r.lemma = "holder_scaling";
  const double a = holder_normalized(q_coarse, eps_coarse, alpha, lambda, c_coarse);
  const double b = holder_normalized(q_fine, eps_fine, alpha, lambda, c_fine);
  r.tested = 1;
  r.value = a > 0.0 && b > 0.0 ? std::max(a / b, b / a) : std::numeric_limits<double>::infinity();
  r.worst_margin = std::log(r.value) - std::log(factor);
  if (!(r.value <= factor)) r.violations = 1;
  r.params = {{"alpha", alpha}, {"eps", eps_coarse}, {"eps_fine", eps_fine}, {"lambda", lambda},
              {"normalized", a},  {"normalized_fine", b}};
  return r;
}

HomotopySheet flat_annulus(const AnnulusSpec& a, double lambda_cap) {
  return sheet_from_map(a.M, a.K, lambda_cap, [&](double t, double th) {
    const double rho = a.r_inner + t * (a.r_outer - a.r_inner);
    return Vec3(rho * std::cos(th), rho * std::sin(th), 0.0);
  });
}

void finalize_sequence(SheetSequence& seq) {
  const auto& lim = seq.limit.vertices();
  seq.sup_distance.clear();
  double lambda = lipschitz_estimate(seq.limit);
  for (const HomotopySheet& s : seq.terms) {
    if (s.M() != seq.limit.M() || s.K() != seq.limit.K()) {
      throw Error(ErrorKind::BadSequence, "term resolution differs from the limit");
    }
    for (int j = 0; j < s.K(); ++j) {
      for (int i : {0, s.M()}) {
        if ((s.at(i, j) - seq.limit.at(i, j)).norm() > 1e-12) {
          throw Error(ErrorKind::BadSequence, "term boundary rings differ from the limit");
        }
      }
    }
    double sup = 0.0;
    for (std::size_t n = 0; n < lim.size(); ++n) sup = std::max(sup, (s.vertices()[n] - lim[n]).norm());
    if (!seq.sup_distance.empty() && sup > seq.sup_distance.back() * (1.0 + 1e-12)) {
      throw Error(ErrorKind::BadSequence, "sup distance to the limit increases along the sequence");
    }
    seq.sup_distance.push_back(sup);
    lambda = std::max(lambda, lipschitz_estimate(s));
  }
  seq.lambda = lambda;
  for (HomotopySheet& s : seq.terms) s.set_lambda_cap(lambda);
  seq.limit.set_lambda_cap(lambda);
}

SheetSequence wrinkle_sequence(const AnnulusSpec& a, int count) {
  SheetSequence seq;
  seq.generator = "wrinkle";
  seq.limit = flat_annulus(a, 0.0);
  for (int n = 1; n <= count; ++n) {
    seq.index.push_back(n);
    seq.terms.push_back(sheet_from_map(a.M, a.K, 0.0, [&](double t, double th) {
      const double rho = a.r_inner + t * (a.r_outer - a.r_inner);
      return Vec3(rho * std::cos(th), rho * std::sin(th), std::sin(n * th) * std::sin(kPi * t) / n);
    }));
  }
  finalize_sequence(seq);
  return seq;
}

SheetSequence bump_sequence(const AnnulusSpec& a, int count) {
  SheetSequence seq;
  seq.generator = "bump";
  seq.limit = flat_annulus(a, 0.0);
  const double mid = 0.5 * (a.r_inner + a.r_outer);
  // Support radius 1/n must stay inside the annulus so the rings are shared.
  const int first = static_cast<int>(std::ceil(2.0 / (a.r_outer - a.r_inner)));
  for (int n = first; n < first + count; ++n) {
    seq.index.push_back(n);
    seq.terms.push_back(sheet_from_map(a.M, a.K, 0.0, [&](double t, double th) {
      const double rho = a.r_inner + t * (a.r_outer - a.r_inner);
      const Vec3 p(rho * std::cos(th), rho * std::sin(th), 0.0);
      const double s = n * std::hypot(p.x() - mid, p.y());
      const double c = std::cos(0.5 * kPi * std::min(s, 1.0));
      return Vec3(p.x(), p.y(), c * c / n);
    }));
  }
  finalize_sequence(seq);
  return seq;
}

std::vector<TestBall> annulus_test_balls(const AnnulusSpec& a) {
  const double mid = 0.5 * (a.r_inner + a.r_outer);
  const double radius = 0.3 * (a.r_outer - a.r_inner);
  std::vector<TestBall> balls;
  for (int k = 0; k < 10; ++k) {
    const double th = 2.0 * kPi * k / 10;
    balls.push_back({Vec3(mid * std::cos(th), mid * std::sin(th), 0.0), radius});
  }
  return balls;
}

namespace {

double cross2(const Eigen::Vector2d& p, const Eigen::Vector2d& q) { return p.x() * q.y() - p.y() * q.x(); }

// Signed area of disk(0, R) intersected with triangle (0, p, q).
double disk_wedge_area(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double R) {
  const double R2 = R * R;
  const Eigen::Vector2d d = q - p;
  const double A = d.squaredNorm();
  if (A == 0.0) return 0.0;
  const double B = p.dot(d);
  const double C = p.squaredNorm() - R2;
  double cuts[4] = {0.0, 0.0, 0.0, 1.0};
  int nc = 1;
  const double disc = B * B - A * C;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    for (double t : {(-B - s) / A, (-B + s) / A}) {
      if (t > 0.0 && t < 1.0) cuts[nc++] = t;
    }
  }
  cuts[nc++] = 1.0;
  double area = 0.0;
  for (int k = 0; k + 1 < nc; ++k) {
    const Eigen::Vector2d a = p + cuts[k] * d, b = p + cuts[k + 1] * d;
    const Eigen::Vector2d m = 0.5 * (a + b);
    if (m.squaredNorm() <= R2) {
      area += 0.5 * cross2(a, b);
    } else {
      area += 0.5 * R2 * std::atan2(cross2(a, b), a.dot(b));
    }
  }
  return area;
}

}  // namespace

double triangle_ball_area(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& center, double r) {
  const Vec3 n = (b - a).cross(c - a);
  const double nn = n.norm();
  if (0.5 * nn < kDegenerateArea) return 0.0;
  const Vec3 nh = n / nn;
  const double h = (center - a).dot(nh);
  const double R2 = r * r - h * h;
  if (R2 <= 0.0) return 0.0;
  const Vec3 o = center - h * nh;
  const Vec3 e1 = (b - a).normalized();
  const Vec3 e2 = nh.cross(e1);
  auto flat = [&](const Vec3& p) { return Eigen::Vector2d((p - o).dot(e1), (p - o).dot(e2)); };
  const Eigen::Vector2d pa = flat(a), pb = flat(b), pc = flat(c);
  const double R = std::sqrt(R2);
  const double s = disk_wedge_area(pa, pb, R) + disk_wedge_area(pb, pc, R) + disk_wedge_area(pc, pa, R);
  return std::abs(s);
}

double ball_area_exact(const TriangleMesh& mesh, const Vec3& center, double r) {
  std::vector<double> parts;
  for (const Triangle& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
    if (((center - hi).cwiseMax(lo - center)).cwiseMax(0.0).norm() > r) continue;
    parts.push_back(triangle_ball_area(a, b, c, center, r));
  }
  return pairwise_sum(parts);
}

LemmaReport lsc_harness(const SheetSequence& seq, const std::vector<TestBall>& balls, double slack) {
  if (seq.terms.empty()) throw Error(ErrorKind::BadSequence, "empty sequence");
  for (std::size_t k = 1; k < seq.sup_distance.size(); ++k) {
    if (seq.sup_distance[k] > seq.sup_distance[k - 1] * (1.0 + 1e-12)) {
      throw Error(ErrorKind::BadSequence, "sup distances are not nonincreasing");
    }
  }
  LemmaReport r;
  r.lemma = "lsc_" + seq.generator;
  r.params = {{"lambda", seq.lambda}, {"slack", slack}, {"terms", static_cast<double>(seq.terms.size())}};
  const std::size_t tail = seq.terms.size() / 2;
  std::vector<TriangleMesh> meshes;
  for (const auto& s : seq.terms) meshes.push_back(to_mesh(s));
  const TriangleMesh limit = to_mesh(seq.limit);

  auto check = [&](auto&& measure) {
    const double target = measure(limit);
    double tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = tail; k < meshes.size(); ++k) tail_min = std::min(tail_min, measure(meshes[k]));
    ++r.tested;
    const double margin = (target * (1.0 - slack) - tail_min) / target;
    r.worst_margin = std::max(r.worst_margin, margin);
    if (margin > 0.0) ++r.violations;
  };
  check([](const TriangleMesh& m) { return mesh_area(m); });
  for (const TestBall& b : balls) {
    check([&](const TriangleMesh& m) { return ball_area_exact(m, b.center, b.radius); });
  }

  const double bound = seq.lambda * seq.lambda * kPi;
  for (const TriangleMesh& m : meshes) {
    ++r.tested;
    const double margin = (mesh_area(m) - bound) / bound;
    r.worst_margin = std::max(r.worst_margin, margin);
    if (margin > 0.0) ++r.violations;
  }
  r.value = seq.sup_distance.back();
  return r;
}

double disk_coverage(const TriangleMesh& mesh, const Disk& disk, double eta, double C) {
  const Vec3 n = disk.normal.normalized();
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(n) * n).normalized();
  const Vec3 e2 = n.cross(e1);
  const double r = disk.radius;
  const double slab = eta * r;

  std::vector<Eigen::Vector2d> flat(mesh.vertices.size());
  std::vector<double> height(mesh.vertices.size());
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const Vec3 d = mesh.vertices[k] - disk.center;
    flat[k] = Eigen::Vector2d(d.dot(e1), d.dot(e2));
    height[k] = d.dot(n);
    if (d.norm() <= 2.0 * r && flat[k].squaredNorm() <= r * r && std::abs(height[k]) > slab) {
      throw Error(ErrorKind::HypothesisUnmet, "sheet leaves the eta*r slab over the disk");
    }
  }

  const double inner = (1.0 - C * eta) * r;
  if (inner <= 0.0) return 1.0;
  const double px = r / 256.0;
  const int half = static_cast<int>(std::ceil(inner / px));
  const int side = 2 * half;

  struct Flat {
    Eigen::Vector2d a, b, c;
    double ylo, yhi;
  };
  std::vector<Flat> tris;
  for (const Triangle& t : mesh.triangles) {
    const double hlo = std::min({height[t[0]], height[t[1]], height[t[2]]});
    const double hhi = std::max({height[t[0]], height[t[1]], height[t[2]]});
    if (hlo > slab || hhi < -slab) continue;
    Flat f{flat[t[0]], flat[t[1]], flat[t[2]], 0.0, 0.0};
    f.ylo = std::min({f.a.y(), f.b.y(), f.c.y()});
    f.yhi = std::max({f.a.y(), f.b.y(), f.c.y()});
    const double xlo = std::min({f.a.x(), f.b.x(), f.c.x()});
    const double xhi = std::max({f.a.x(), f.b.x(), f.c.x()});
    if (f.yhi < -inner || f.ylo > inner || xhi < -inner || xlo > inner) continue;
    if (std::abs(cross2(f.b - f.a, f.c - f.a)) < 2.0 * kDegenerateArea) continue;
    tris.push_back(f);
  }

  long inside = 0, covered = 0;
#pragma omp parallel for reduction(+ : inside, covered) schedule(dynamic, 4)
  for (int row = 0; row < side; ++row) {
    const double y = (row - half + 0.5) * px;
    std::vector<const Flat*> active;
    for (const Flat& f : tris) {
      if (f.ylo <= y && f.yhi >= y) active.push_back(&f);
    }
    for (int col = 0; col < side; ++col) {
      const double x = (col - half + 0.5) * px;
      if (x * x + y * y >= inner * inner) continue;
      ++inside;
      const Eigen::Vector2d p(x, y);
      for (const Flat* f : active) {
        const double d0 = cross2(f->b - f->a, p - f->a);
        const double d1 = cross2(f->c - f->b, p - f->b);
        const double d2 = cross2(f->a - f->c, p - f->c);
        if ((d0 >= 0 && d1 >= 0 && d2 >= 0) || (d0 <= 0 && d1 <= 0 && d2 <= 0)) {
          ++covered;
          break;
        }
      }
    }
  }
  return inside == 0 ? 1.0 : static_cast<double>(covered) / inside;
}

double disk_coverage(const HomotopySheet& sheet, const Disk& disk, double eta, double C) {
  return disk_coverage(to_mesh(sheet), disk, eta, C);
}

LemmaReport density_check(const HomotopySheet& term, double sup_distance, const std::vector<Vec3>& points,
                          double r, double C, double slack) {
  LemmaReport rep;
  rep.lemma = "density";
  const double eta = sup_distance / r;
  const double target = std::pow(std::max(0.0, 1.0 - C * eta), 2) - slack;
  rep.params = {{"r", r}, {"eta", eta}, {"C", C}, {"slack", slack}};
  rep.note = "C is a harness constant";
  const TriangleMesh mesh = to_mesh(term);
  std::vector<double> ratio(points.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < static_cast<long>(points.size()); ++k) {
    ratio[k] = ball_area_exact(mesh, points[k], r * (1.0 + C * eta)) / (kPi * r * r);
  }
  rep.value = std::numeric_limits<double>::infinity();
  for (double q : ratio) {
    ++rep.tested;
    rep.value = std::min(rep.value, q);
    rep.worst_margin = std::max(rep.worst_margin, target - q);
    if (q < target) ++rep.violations;
  }
  return rep;
}

std::vector<Vec3> annulus_points(double lo, double hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(lo, hi), angle(0.0, 2.0 * kPi);
  std::vector<Vec3> pts;
  for (int k = 0; k < count; ++k) {
    const double rho = radius(rng);
    const double th = angle(rng);
    pts.emplace_back(rho * std::cos(th), rho * std::sin(th), 0.0);
  }
  return pts;
}

}  // namespace plateau
