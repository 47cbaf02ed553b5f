#include "plateau/coupling.hpp"

#include <string>

#include "plateau/error.hpp"
#include "plateau/kernels.hpp"
#include "plateau/reduce.hpp"

namespace plateau {

void require_inside_grid(const std::vector<Vec3>& vertices, const Grid& grid) {
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (!grid.contains(vertices[k], 1e-12)) {
      throw Error(ErrorKind::SheetOutsideGrid, "vertex " + std::to_string(k) + " outside the grid box");
    }
  }
}

SurfaceMeasure splat_measure(const TriangleMesh& mesh, const Grid& grid) {
  require_inside_grid(mesh.vertices, grid);
  SurfaceMeasure m = SurfaceMeasure::zero(grid);
  kernels::omp::splat(mesh, grid, m.node_mass);
  m.total = pairwise_sum(m.node_mass);
  return m;
}

SurfaceMeasure splat_measure(const HomotopySheet& sheet, const Grid& grid) {
  return splat_measure(to_mesh(sheet), grid);
}

double surface_energy(const TriangleMesh& mesh, const PhaseField& u, double delta) {
  require_inside_grid(mesh.vertices, u.grid);
  return kernels::omp::weighted_area(mesh, u, delta);
}

double surface_energy(const HomotopySheet& sheet, const PhaseField& u, double delta) {
  return surface_energy(to_mesh(sheet), u, delta);
}

EnergyReport total_energy(const PhaseField& u, const TriangleMesh& mesh, const SolverParams& params) {
  const QuadraticEnergy q = quadratic_energy(u, SurfaceMeasure::zero(u.grid), params);
  EnergyReport r;
  r.dirichlet = q.dirichlet;
  r.potential = q.potential;
  r.surface = surface_energy(mesh, u, params.delta_eps) / params.c_eps;
  r.total = r.dirichlet + r.potential + r.surface;
  return r;
}

EnergyReport total_energy(const PhaseField& u, const HomotopySheet& sheet, const SolverParams& params) {
  return total_energy(u, to_mesh(sheet), params);
}

}  // namespace plateau
