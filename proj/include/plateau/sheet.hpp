#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "plateau/geometry.hpp"

namespace plateau {

/// Discrete Lipschitz homotopy between two rings: an (M+1) x K vertex grid,
/// row i at parameter t = i/M, column j at angle 2*pi*j/K (periodic in j).
/// Row 0 is the first boundary ring, row M the second.
class HomotopySheet {
 public:
  HomotopySheet() = default;
  HomotopySheet(int M, int K, double lambda_cap, std::vector<Vec3> vertices);

  int rows() const { return M_ + 1; }
  int M() const { return M_; }
  int K() const { return K_; }
  double lambda_cap() const { return lambda_cap_; }
  void set_lambda_cap(double cap) { lambda_cap_ = cap; }

  int index(int i, int j) const { return i * K_ + ((j % K_) + K_) % K_; }
  const Vec3& at(int i, int j) const { return vertices_[index(i, j)]; }
  Vec3& at(int i, int j) { return vertices_[index(i, j)]; }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  std::vector<Vec3>& vertices() { return vertices_; }

  bool is_boundary_row(int i) const { return i == 0 || i == M_; }

 private:
  int M_ = 0;
  int K_ = 0;
  double lambda_cap_ = 0.0;
  std::vector<Vec3> vertices_;
};

using Triangle = std::array<int, 3>;

/// Triangle soup over a shared vertex array. Sheets triangulate into this;
/// test fixtures (planar patches, disks) are built directly.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

/// Triangles with area below this contribute neither area nor gradient.
inline constexpr double kDegenerateArea = 1e-14;

enum class InitMode { Linear };

HomotopySheet init_sheet(const Ring& ring0, const Ring& ring1, int M, const ConvexRegion& inner,
                         double lambda_cap, InitMode mode = InitMode::Linear);

/// Sheet sampled from a parametrization map(t, theta), t in [0,1],
/// theta in [0, 2*pi). No containment checks; used for fixtures and
/// sequence generators.
HomotopySheet sheet_from_map(int M, int K, double lambda_cap,
                             const std::function<Vec3(double, double)>& map);

/// Two triangles per grid cell, split along the shorter diagonal (ties take
/// the (i,j)-(i+1,j+1) diagonal).
std::vector<Triangle> triangulate(const HomotopySheet& sheet);
TriangleMesh to_mesh(const HomotopySheet& sheet);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double mesh_area(const TriangleMesh& mesh);

/// Parametrized area (with multiplicity) of the triangulated sheet.
double sheet_area(const HomotopySheet& sheet);

/// Largest singular value of the discrete differential over all cells, using
/// the four corner finite-difference Jacobians of each cell.
double lipschitz_estimate(const HomotopySheet& sheet);

struct RadiusSequence {
  double r_max = 0.0;
  int levels = 4;  // r_max * 2^-k, k = 0..levels-1
  std::vector<double> radii() const;
};

struct AhlforsReport {
  double sup_ratio = 0.0;
  int argmax_center = -1;  // vertex index
  Vec3 argmax_point = Vec3::Zero();
  double argmax_radius = 0.0;
  std::string note;
};

/// Area of the mesh inside the closed ball, by uniform 4-fold subdivision of
/// crossing triangles until their diameter is below r/8 and counting
/// fragments whose centroid is inside.
double ball_area_subdivided(const TriangleMesh& mesh, const Vec3& center, double r);

/// sup over sheet vertices and the given radii of area(B(x,r)) / (pi r^2).
AhlforsReport ahlfors_ratio(const HomotopySheet& sheet, const RadiusSequence& radii);
AhlforsReport ahlfors_ratio(const TriangleMesh& mesh, const std::vector<int>& centers,
                            const RadiusSequence& radii);

double bounding_diameter(const std::vector<Vec3>& points);

void write_obj(std::ostream& out, const HomotopySheet& sheet);
HomotopySheet read_obj(std::istream& in);

}  // namespace plateau
