#include "plateau/fragments.hpp"
#include "plateau/kernels.hpp"

namespace plateau::kernels::serial {

void apply_operator(const FieldOperator& op, std::span<const double> x, std::span<double> y) {
  const Grid& g = *op.grid;
  for (int k = 0; k < g.nz(); ++k) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t n = g.index(i, j, k);
        if (g.is_boundary(i, j, k)) {
          y[n] = 0.0;
          continue;
        }
        double nbrs = 0.0;
        if (!g.is_boundary(i - 1, j, k)) nbrs += x[g.index(i - 1, j, k)];
        if (!g.is_boundary(i + 1, j, k)) nbrs += x[g.index(i + 1, j, k)];
        if (!g.is_boundary(i, j - 1, k)) nbrs += x[g.index(i, j - 1, k)];
        if (!g.is_boundary(i, j + 1, k)) nbrs += x[g.index(i, j + 1, k)];
        if (!g.is_boundary(i, j, k - 1)) nbrs += x[g.index(i, j, k - 1)];
        if (!g.is_boundary(i, j, k + 1)) nbrs += x[g.index(i, j, k + 1)];
        y[n] = op.edge * (6.0 * x[n] - nbrs) + (op.mass + op.coupling[n]) * x[n];
      }
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void splat(const TriangleMesh& mesh, const Grid& grid, std::span<double> node_mass) {
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double area = triangle_area(a, b, c);
    if (area == 0.0) continue;
    const int level = fragment_level(a, b, c, grid);
    const double frag = std::ldexp(area, -2 * level);
    for_each_fragment_centroid(level, [&](double, double w1, double w2) {
      deposit(grid, Vec3(a + w1 * (b - a) + w2 * (c - a)), frag, node_mass);
    });
  }
}

double weighted_area(const TriangleMesh& mesh, const PhaseField& u, double delta) {
  double total = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double area = triangle_area(a, b, c);
    if (area == 0.0) continue;
    const int level = fragment_level(a, b, c, u.grid);
    const double frag = std::ldexp(area, -2 * level);
    for_each_fragment_centroid(level, [&](double, double w1, double w2) {
      const double s = sample_field(u, Vec3(a + w1 * (b - a) + w2 * (c - a)));
      total += frag * (s * s + delta);
    });
  }
  return total;
}

}  // namespace plateau::kernels::serial
