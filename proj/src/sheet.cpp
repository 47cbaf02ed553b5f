#include "plateau/sheet.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "plateau/error.hpp"
#include "plateau/fragments.hpp"
#include "plateau/reduce.hpp"
#include "plateau/spatial.hpp"

namespace plateau {

HomotopySheet::HomotopySheet(int M, int K, double lambda_cap, std::vector<Vec3> vertices)
    : M_(M), K_(K), lambda_cap_(lambda_cap), vertices_(std::move(vertices)) {
  if (M < 1 || K < 3) throw Error(ErrorKind::ValidationError, "sheet resolution too small");
  if (vertices_.size() != static_cast<std::size_t>(M + 1) * K) {
    throw Error(ErrorKind::ValidationError, "sheet vertex count does not match (M+1)*K");
  }
}

HomotopySheet init_sheet(const Ring& ring0, const Ring& ring1, int M, const ConvexRegion& inner,
                         double lambda_cap, InitMode mode) {
  if (ring0.size() != ring1.size()) {
    throw Error(ErrorKind::RingMismatch,
                "rings have " + std::to_string(ring0.size()) + " and " + std::to_string(ring1.size()) + " points");
  }
  const int K = static_cast<int>(ring0.size());
  if (K < 8) throw Error(ErrorKind::ValidationError, "sheet needs K >= 8");
  if (M < 2) throw Error(ErrorKind::ValidationError, "sheet needs M >= 2");
  for (const Ring* ring : {&ring0, &ring1}) {
    for (const Vec3& p : *ring) {
      if (!contains(inner, p, 1e-9)) throw Error(ErrorKind::OutsideC0, "ring point outside inner region");
    }
  }
  std::vector<Vec3> v(static_cast<std::size_t>(M + 1) * K);
  switch (mode) {
    case InitMode::Linear:
      for (int i = 0; i <= M; ++i) {
        const double t = static_cast<double>(i) / M;
        for (int j = 0; j < K; ++j) {
          v[i * K + j] = i == 0 ? ring0[j] : i == M ? ring1[j] : Vec3((1.0 - t) * ring0[j] + t * ring1[j]);
        }
      }
      break;
  }
  return HomotopySheet(M, K, lambda_cap, std::move(v));
}

HomotopySheet sheet_from_map(int M, int K, double lambda_cap,
                             const std::function<Vec3(double, double)>& map) {
  std::vector<Vec3> v(static_cast<std::size_t>(M + 1) * K);
  for (int i = 0; i <= M; ++i) {
    for (int j = 0; j < K; ++j) {
      v[i * K + j] = map(static_cast<double>(i) / M, 2.0 * std::numbers::pi * j / K);
    }
  }
  return HomotopySheet(M, K, lambda_cap, std::move(v));
}

std::vector<Triangle> triangulate(const HomotopySheet& s) {
  std::vector<Triangle> tris;
  tris.reserve(2 * static_cast<std::size_t>(s.M()) * s.K());
  for (int i = 0; i < s.M(); ++i) {
    for (int j = 0; j < s.K(); ++j) {
      const int a = s.index(i, j), b = s.index(i + 1, j), c = s.index(i + 1, j + 1), d = s.index(i, j + 1);
      const auto& v = s.vertices();
      if ((v[a] - v[c]).squaredNorm() <= (v[b] - v[d]).squaredNorm()) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  }
  return tris;
}

TriangleMesh to_mesh(const HomotopySheet& sheet) { return TriangleMesh{sheet.vertices(), triangulate(sheet)}; }

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double area = 0.5 * (b - a).cross(c - a).norm();
  return area < kDegenerateArea ? 0.0 : area;
}

double mesh_area(const TriangleMesh& mesh) {
  std::vector<double> areas(mesh.triangles.size());
  const long n = static_cast<long>(areas.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < n; ++t) {
    const auto& tri = mesh.triangles[t];
    areas[t] = triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
  }
  return pairwise_sum(areas);
}

double sheet_area(const HomotopySheet& sheet) { return mesh_area(to_mesh(sheet)); }

namespace {

double max_singular_value(const Vec3& a, const Vec3& b) {
  const double aa = a.squaredNorm(), bb = b.squaredNorm(), ab = a.dot(b);
  const double lmax = 0.5 * (aa + bb + std::sqrt((aa - bb) * (aa - bb) + 4.0 * ab * ab));
  return std::sqrt(lmax);
}

}  // namespace

double lipschitz_estimate(const HomotopySheet& s) {
  const double st = s.M();
  const double sth = s.K() / (2.0 * std::numbers::pi);
  double best = 0.0;
  for (int i = 0; i < s.M(); ++i) {
    for (int j = 0; j < s.K(); ++j) {
      const Vec3& p00 = s.at(i, j);
      const Vec3& p10 = s.at(i + 1, j);
      const Vec3& p01 = s.at(i, j + 1);
      const Vec3& p11 = s.at(i + 1, j + 1);
      // Each corner pairs one row difference with one column difference.
      best = std::max({best, max_singular_value(st * (p10 - p00), sth * (p01 - p00)),
                       max_singular_value(st * (p11 - p01), sth * (p01 - p00)),
                       max_singular_value(st * (p10 - p00), sth * (p11 - p10)),
                       max_singular_value(st * (p11 - p01), sth * (p11 - p10))});
    }
  }
  return best;
}

std::vector<double> RadiusSequence::radii() const {
  std::vector<double> r;
  for (int k = 0; k < levels; ++k) r.push_back(std::ldexp(r_max, -k));
  return r;
}

double bounding_diameter(const std::vector<Vec3>& points) {
  if (points.empty()) return 0.0;
  Vec3 lo = points.front(), hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

namespace {

double ball_area_with(const TriangleMesh& mesh, const TriangleBuckets* buckets, const Vec3& x, double r) {
  const double r2 = r * r;
  const double threshold = r / 8.0;
  double area = 0.0;
  auto visit = [&](int t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double full = triangle_area(a, b, c);
    if (full == 0.0) return;
    const double da = (a - x).squaredNorm(), db = (b - x).squaredNorm(), dc = (c - x).squaredNorm();
    if (da <= r2 && db <= r2 && dc <= r2) {
      area += full;
      return;
    }
    if (point_triangle_distance(x, a, b, c) > r) return;
    const int level = subdivision_level(triangle_diameter(a, b, c), threshold);
    const double frag = std::ldexp(full, -2 * level);
    for_each_fragment_centroid(level, [&](double w0, double w1, double w2) {
      if ((w0 * a + w1 * b + w2 * c - x).squaredNorm() <= r2) area += frag;
    });
  };
  if (buckets) {
    buckets->for_each_near(x, r, visit);
  } else {
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) visit(t);
  }
  return area;
}

}  // namespace

double ball_area_subdivided(const TriangleMesh& mesh, const Vec3& center, double r) {
  return ball_area_with(mesh, nullptr, center, r);
}

AhlforsReport ahlfors_ratio(const TriangleMesh& mesh, const std::vector<int>& centers,
                            const RadiusSequence& spec) {
  const std::vector<double> radii = spec.radii();
  AhlforsReport report;
  report.note =
      "sup sampled at sheet vertices and dyadic radii; under-estimates the continuous sup";
  if (centers.empty() || radii.empty() || mesh.triangles.empty()) return report;

  const double cell = std::max(radii.front() / 2.0, 1e-6);
  const TriangleBuckets buckets(mesh, cell);
  const long nc = static_cast<long>(centers.size());
  const int nr = static_cast<int>(radii.size());
  std::vector<double> ratio(static_cast<std::size_t>(nc) * nr);
#pragma omp parallel for schedule(dynamic, 16)
  for (long c = 0; c < nc; ++c) {
    const Vec3& x = mesh.vertices[centers[c]];
    for (int k = 0; k < nr; ++k) {
      ratio[c * nr + k] = ball_area_with(mesh, &buckets, x, radii[k]) / (std::numbers::pi * radii[k] * radii[k]);
    }
  }
  for (long c = 0; c < nc; ++c) {
    for (int k = 0; k < nr; ++k) {
      if (ratio[c * nr + k] > report.sup_ratio) {
        report.sup_ratio = ratio[c * nr + k];
        report.argmax_center = centers[c];
        report.argmax_point = mesh.vertices[centers[c]];
        report.argmax_radius = radii[k];
      }
    }
  }
  return report;
}

AhlforsReport ahlfors_ratio(const HomotopySheet& sheet, const RadiusSequence& radii) {
  std::vector<int> centers(sheet.vertices().size());
  for (std::size_t k = 0; k < centers.size(); ++k) centers[k] = static_cast<int>(k);
  return ahlfors_ratio(to_mesh(sheet), centers, radii);
}

void write_obj(std::ostream& out, const HomotopySheet& sheet) {
  char buf[128];
  out << "# plateau homotopy sheet\n";
  out << "# M " << sheet.M() << "\n";
  out << "# K " << sheet.K() << "\n";
  std::snprintf(buf, sizeof buf, "# lambda %.17g\n", sheet.lambda_cap());
  out << buf;
  for (const Vec3& v : sheet.vertices()) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const Triangle& t : triangulate(sheet)) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

HomotopySheet read_obj(std::istream& in) {
  int M = -1, K = -1;
  double lambda = 0.0;
  std::vector<Vec3> vertices;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "#") {
      std::string key;
      ls >> key;
      if (key == "M") ls >> M;
      else if (key == "K") ls >> K;
      else if (key == "lambda") ls >> lambda;
    } else if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) {
        throw Error(ErrorKind::ParseError, "bad vertex at OBJ line " + std::to_string(lineno));
      }
      vertices.push_back(p);
    }
  }
  if (M < 1 || K < 3) throw Error(ErrorKind::ParseError, "OBJ header lacks M/K");
  return HomotopySheet(M, K, lambda, std::move(vertices));
}

}  // namespace plateau
