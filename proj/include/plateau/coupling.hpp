#pragma once

#include "plateau/field.hpp"
#include "plateau/params.hpp"
#include "plateau/sheet.hpp"

namespace plateau {

/// Deposits the area of every triangle fragment (diameter < h/2) onto the 8
/// nodes around its centroid with trilinear weights. Total mass equals the
/// triangulated area up to rounding. Throws SheetOutsideGrid.
SurfaceMeasure splat_measure(const TriangleMesh& mesh, const Grid& grid);
SurfaceMeasure splat_measure(const HomotopySheet& sheet, const Grid& grid);

/// Fragment-centroid quadrature of the weighted area integral
///   sum_f area_f * (u(centroid_f)^2 + delta).
double surface_energy(const TriangleMesh& mesh, const PhaseField& u, double delta);
double surface_energy(const HomotopySheet& sheet, const PhaseField& u, double delta);

struct EnergyReport {
  double dirichlet = 0.0;
  double potential = 0.0;
  double surface = 0.0;
  double total = 0.0;
};

/// Grid terms from the field quadratic plus (1/c_eps) times the surface
/// quadrature of (u^2 + delta_eps).
EnergyReport total_energy(const PhaseField& u, const HomotopySheet& sheet, const SolverParams& params);
EnergyReport total_energy(const PhaseField& u, const TriangleMesh& mesh, const SolverParams& params);

/// Throws SheetOutsideGrid unless every vertex lies inside the grid box.
void require_inside_grid(const std::vector<Vec3>& vertices, const Grid& grid);

}  // namespace plateau
