#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plateau/fragments.hpp"
#include "plateau/kernels.hpp"
#include "plateau/reduce.hpp"

namespace plateau::kernels::omp {

namespace {
constexpr std::size_t kBlock = 4096;

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}
}  // namespace

void apply_operator(const FieldOperator& op, std::span<const double> x, std::span<double> y) {
  const Grid& g = *op.grid;
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  const std::ptrdiff_t sy = nx, sz = static_cast<std::ptrdiff_t>(nx) * ny;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = g.index(0, j, k);
      if (k == 0 || k == nz - 1 || j == 0 || j == ny - 1) {
        std::fill(y.begin() + row, y.begin() + row + nx, 0.0);
        continue;
      }
      y[row] = 0.0;
      y[row + nx - 1] = 0.0;
      const bool lo_j = j == 1, hi_j = j == ny - 2, lo_k = k == 1, hi_k = k == nz - 2;
      for (int i = 1; i < nx - 1; ++i) {
        const std::size_t n = row + i;
        double nbrs = 0.0;
        if (i > 1) nbrs += x[n - 1];
        if (i < nx - 2) nbrs += x[n + 1];
        if (!lo_j) nbrs += x[n - sy];
        if (!hi_j) nbrs += x[n + sy];
        if (!lo_k) nbrs += x[n - sz];
        if (!hi_k) nbrs += x[n + sz];
        y[n] = op.edge * (6.0 * x[n] - nbrs) + (op.mass + op.coupling[n]) * x[n];
      }
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const long blocks = static_cast<long>((n + kBlock - 1) / kBlock);
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = blk * kBlock, hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += a[k] * b[k];
    partial[blk] = s;
  }
  return pairwise_sum(partial);
}

void splat(const TriangleMesh& mesh, const Grid& grid, std::span<double> node_mass) {
  const int threads = thread_count();
  const long nt = static_cast<long>(mesh.triangles.size());
  std::vector<std::vector<double>> local(threads);
#pragma omp parallel
  {
    std::vector<double>& mine = local[thread_id()];
    mine.assign(node_mass.size(), 0.0);
#pragma omp for schedule(static)
    for (long t = 0; t < nt; ++t) {
      const auto& tri = mesh.triangles[t];
      const Vec3& a = mesh.vertices[tri[0]];
      const Vec3& b = mesh.vertices[tri[1]];
      const Vec3& c = mesh.vertices[tri[2]];
      const double area = triangle_area(a, b, c);
      if (area == 0.0) continue;
      const int level = fragment_level(a, b, c, grid);
      const double frag = std::ldexp(area, -2 * level);
      for_each_fragment_centroid(level, [&](double, double w1, double w2) {
        deposit(grid, Vec3(a + w1 * (b - a) + w2 * (c - a)), frag, mine);
      });
    }
  }
  // Merge in thread order so the result is fixed for a given thread count.
  const long nn = static_cast<long>(node_mass.size());
#pragma omp parallel for schedule(static)
  for (long n = 0; n < nn; ++n) {
    double s = node_mass[n];
    for (int t = 0; t < threads; ++t) {
      if (!local[t].empty()) s += local[t][n];
    }
    node_mass[n] = s;
  }
}

double weighted_area(const TriangleMesh& mesh, const PhaseField& u, double delta) {
  const long nt = static_cast<long>(mesh.triangles.size());
  std::vector<double> per_triangle(nt, 0.0);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double area = triangle_area(a, b, c);
    if (area == 0.0) continue;
    const int level = fragment_level(a, b, c, u.grid);
    const double frag = std::ldexp(area, -2 * level);
    double s = 0.0;
    for_each_fragment_centroid(level, [&](double, double w1, double w2) {
      const double v = sample_field(u, Vec3(a + w1 * (b - a) + w2 * (c - a)));
      s += v * v + delta;
    });
    per_triangle[t] = frag * s;
  }
  return pairwise_sum(per_triangle);
}

}  // namespace plateau::kernels::omp
