#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "plateau/geometry.hpp"
#include "plateau/params.hpp"

namespace plateau {

/// Structured node grid over the container box. Nodes on any box face are
/// Dirichlet nodes.
struct Grid {
  Vec3 origin = Vec3::Zero();
  double h = 0.0;
  std::array<int, 3> dims{0, 0, 0};  // cell counts

  int nx() const { return dims[0] + 1; }
  int ny() const { return dims[1] + 1; }
  int nz() const { return dims[2] + 1; }
  std::size_t node_count() const { return static_cast<std::size_t>(nx()) * ny() * nz(); }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx()) * (j + static_cast<std::size_t>(ny()) * k);
  }
  Vec3 node(int i, int j, int k) const { return origin + h * Vec3(i, j, k); }
  Vec3 upper() const { return origin + h * Vec3(dims[0], dims[1], dims[2]); }
  bool is_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == dims[0] || j == dims[1] || k == dims[2];
  }
  bool contains(const Vec3& p, double tol = 1e-12) const;
};

Grid make_grid(const Box& box, double h);
Grid make_grid(const Domain& domain, double h);

/// Per-node nonnegative area masses representing the surface measure on
/// the grid, with their cached sum.
struct SurfaceMeasure {
  std::vector<double> node_mass;
  double total = 0.0;

  static SurfaceMeasure zero(const Grid& grid) { return {std::vector<double>(grid.node_count(), 0.0), 0.0}; }
};

struct PhaseField {
  Grid grid;
  std::vector<double> values;

  static PhaseField constant(const Grid& grid, double value) {
    return {grid, std::vector<double>(grid.node_count(), value)};
  }
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Unique minimizer of the discrete quadratic
///   eps * sum_edges h (u_i - u_j)^2 + h^3/(4 eps) * sum_nodes (1 - u)^2
///     + (1/c_eps) * sum_nodes w_n u_n^2
/// with u = 1 on Dirichlet nodes, by Jacobi-preconditioned CG on 1 - u.
PhaseField solve_phase_field(const Grid& grid, const SurfaceMeasure& measure, const SolverParams& params,
                             double tol, SolveStats* stats = nullptr, const PhaseField* warm_start = nullptr);

struct QuadraticEnergy {
  double dirichlet = 0.0;
  double potential = 0.0;
  double coupling = 0.0;  // (1/c_eps) sum w u^2
  double total() const { return dirichlet + potential + coupling; }
};

QuadraticEnergy quadratic_energy(const PhaseField& u, const SurfaceMeasure& measure, const SolverParams& params);

/// Trilinear interpolation; exact at nodes. Throws OutOfDomain.
double sample_field(const PhaseField& u, const Vec3& p);

/// Value and gradient of the trilinear interpolant inside the containing
/// cell. Throws OutOfDomain.
double sample_field_gradient(const PhaseField& u, const Vec3& p, Vec3& gradient);

void write_vtk(std::ostream& out, const PhaseField& u);
PhaseField read_vtk(std::istream& in);

}  // namespace plateau
