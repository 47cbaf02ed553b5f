#include "plateau/field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "plateau/error.hpp"
#include "plateau/kernels.hpp"
#include "plateau/reduce.hpp"

namespace plateau {

bool Grid::contains(const Vec3& p, double tol) const {
  const Vec3 hi = upper();
  for (int d = 0; d < 3; ++d) {
    if (!(p[d] >= origin[d] - tol && p[d] <= hi[d] + tol)) return false;
  }
  return true;
}

Grid make_grid(const Box& box, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::NonConformingSpacing, "spacing must be positive");
  Grid g;
  g.origin = box.lo;
  g.h = h;
  for (int d = 0; d < 3; ++d) {
    const double len = box.hi[d] - box.lo[d];
    const double cells = std::round(len / h);
    if (cells < 2 || std::abs(cells * h - len) > 1e-9) {
      throw Error(ErrorKind::NonConformingSpacing,
                  "h = " + std::to_string(h) + " does not divide edge length " + std::to_string(len));
    }
    g.dims[d] = static_cast<int>(cells);
  }
  return g;
}

Grid make_grid(const Domain& domain, double h) { return make_grid(domain.outer_box, h); }

PhaseField solve_phase_field(const Grid& grid, const SurfaceMeasure& measure, const SolverParams& params,
                             double tol, SolveStats* stats, const PhaseField* warm_start) {
  const double eps = params.epsilon;
  if (!(eps > 0.0) || !(params.c_eps > 0.0)) throw Error(ErrorKind::ValidationError, "epsilon and c_eps must be positive");
  if (grid.h > 0.5 * eps * (1.0 + 1e-12)) {
    throw Error(ErrorKind::ResolutionTooCoarse,
                "h = " + std::to_string(grid.h) + " exceeds eps/2 = " + std::to_string(0.5 * eps));
  }
  const std::size_t n = grid.node_count();
  if (measure.node_mass.size() != n) throw Error(ErrorKind::ValidationError, "measure defined on a different grid");

  std::vector<double> coupling(n), rhs(n, 0.0), diag(n, 1.0);
  const double edge = eps * grid.h;
  const double mass = grid.h * grid.h * grid.h / (4.0 * eps);
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const std::size_t m = grid.index(i, j, k);
        coupling[m] = measure.node_mass[m] / params.c_eps;
        if (!grid.is_boundary(i, j, k)) {
          rhs[m] = coupling[m];
          diag[m] = 6.0 * edge + mass + coupling[m];
        }
      }
  const kernels::FieldOperator op{&grid, edge, mass, coupling};

  // Unknown v = 1 - u, zero on Dirichlet nodes.
  std::vector<double> v(n, 0.0);
  if (warm_start && warm_start->values.size() == n) {
    for (int k = 1; k < grid.nz() - 1; ++k)
      for (int j = 1; j < grid.ny() - 1; ++j)
        for (int i = 1; i < grid.nx() - 1; ++i) {
          const std::size_t m = grid.index(i, j, k);
          v[m] = 1.0 - warm_start->values[m];
        }
  }

  const double bnorm = std::sqrt(kernels::omp::dot(rhs, rhs));
  std::vector<double> r(n), z(n), p(n), q(n);
  int iters = 0;
  double rel = 0.0;
  if (bnorm > 0.0) {
    kernels::omp::apply_operator(op, v, q);
    for (std::size_t m = 0; m < n; ++m) r[m] = rhs[m] - q[m];
    for (std::size_t m = 0; m < n; ++m) z[m] = r[m] / diag[m];
    p = z;
    double rz = kernels::omp::dot(r, z);
    rel = std::sqrt(kernels::omp::dot(r, r)) / bnorm;
    const int max_iters = 50 * (grid.dims[0] + grid.dims[1] + grid.dims[2]);
    while (rel > tol) {
      if (iters >= max_iters) {
        throw Error(ErrorKind::NoConvergence, "CG stopped after " + std::to_string(iters) +
                                                  " iterations at relative residual " + std::to_string(rel));
      }
      kernels::omp::apply_operator(op, p, q);
      const double alpha = rz / kernels::omp::dot(p, q);
      const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
      for (long m = 0; m < nn; ++m) {
        v[m] += alpha * p[m];
        r[m] -= alpha * q[m];
        z[m] = r[m] / diag[m];
      }
      const double rz_next = kernels::omp::dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
#pragma omp parallel for schedule(static)
      for (long m = 0; m < nn; ++m) p[m] = z[m] + beta * p[m];
      rel = std::sqrt(kernels::omp::dot(r, r)) / bnorm;
      ++iters;
    }
  }
  if (stats) *stats = {iters, rel};

  PhaseField u{grid, std::vector<double>(n)};
  for (std::size_t m = 0; m < n; ++m) u.values[m] = 1.0 - v[m];
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i)
        if (grid.is_boundary(i, j, k)) u.values[grid.index(i, j, k)] = 1.0;
  return u;
}

QuadraticEnergy quadratic_energy(const PhaseField& u, const SurfaceMeasure& measure, const SolverParams& params) {
  const Grid& g = u.grid;
  const double eps = params.epsilon;
  const long nz = g.nz();
  std::vector<double> grad(nz, 0.0), pot(nz, 0.0), coup(nz, 0.0);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < nz; ++k) {
    double sg = 0.0, sp = 0.0, sc = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t m = g.index(i, j, static_cast<int>(k));
        const double um = u.values[m];
        if (i + 1 < g.nx()) sg += (um - u.values[m + 1]) * (um - u.values[m + 1]);
        if (j + 1 < g.ny()) sg += (um - u.values[m + g.nx()]) * (um - u.values[m + g.nx()]);
        if (k + 1 < nz) {
          const double d = um - u.values[g.index(i, j, static_cast<int>(k) + 1)];
          sg += d * d;
        }
        sp += (1.0 - um) * (1.0 - um);
        sc += measure.node_mass[m] * um * um;
      }
    grad[k] = sg;
    pot[k] = sp;
    coup[k] = sc;
  }
  QuadraticEnergy e;
  e.dirichlet = eps * g.h * pairwise_sum(grad);
  e.potential = g.h * g.h * g.h / (4.0 * eps) * pairwise_sum(pot);
  e.coupling = pairwise_sum(coup) / params.c_eps;
  return e;
}

namespace {

struct CellCoords {
  std::size_t base;
  double f[3];
};

CellCoords locate(const Grid& g, const Vec3& p) {
  if (!g.contains(p, 1e-12 * std::max(1.0, g.h))) {
    throw Error(ErrorKind::OutOfDomain, "point outside the grid box");
  }
  CellCoords c;
  int cell[3];
  for (int d = 0; d < 3; ++d) {
    const double s = (p[d] - g.origin[d]) / g.h;
    cell[d] = std::clamp(static_cast<int>(std::floor(s)), 0, g.dims[d] - 1);
    c.f[d] = std::clamp(s - cell[d], 0.0, 1.0);
  }
  c.base = g.index(cell[0], cell[1], cell[2]);
  return c;
}

}  // namespace

double sample_field(const PhaseField& u, const Vec3& p) {
  const Grid& g = u.grid;
  const CellCoords c = locate(g, p);
  const std::size_t sy = g.nx(), sz = static_cast<std::size_t>(g.nx()) * g.ny();
  const double* v = u.values.data() + c.base;
  const double fx = c.f[0], fy = c.f[1], fz = c.f[2];
  const double c00 = v[0] + fx * (v[1] - v[0]);
  const double c10 = v[sy] + fx * (v[sy + 1] - v[sy]);
  const double c01 = v[sz] + fx * (v[sz + 1] - v[sz]);
  const double c11 = v[sz + sy] + fx * (v[sz + sy + 1] - v[sz + sy]);
  const double c0 = c00 + fy * (c10 - c00);
  const double c1 = c01 + fy * (c11 - c01);
  return c0 + fz * (c1 - c0);
}

double sample_field_gradient(const PhaseField& u, const Vec3& p, Vec3& gradient) {
  const Grid& g = u.grid;
  const CellCoords c = locate(g, p);
  const std::size_t sy = g.nx(), sz = static_cast<std::size_t>(g.nx()) * g.ny();
  const double* v = u.values.data() + c.base;
  const double fx = c.f[0], fy = c.f[1], fz = c.f[2];
  const double v000 = v[0], v100 = v[1], v010 = v[sy], v110 = v[sy + 1];
  const double v001 = v[sz], v101 = v[sz + 1], v011 = v[sz + sy], v111 = v[sz + sy + 1];
  const double c00 = v000 + fx * (v100 - v000);
  const double c10 = v010 + fx * (v110 - v010);
  const double c01 = v001 + fx * (v101 - v001);
  const double c11 = v011 + fx * (v111 - v011);
  const double c0 = c00 + fy * (c10 - c00);
  const double c1 = c01 + fy * (c11 - c01);
  const double dx0 = (v100 - v000) + fy * ((v110 - v010) - (v100 - v000));
  const double dx1 = (v101 - v001) + fy * ((v111 - v011) - (v101 - v001));
  gradient.x() = (dx0 + fz * (dx1 - dx0)) / g.h;
  gradient.y() = ((c10 - c00) + fz * ((c11 - c01) - (c10 - c00))) / g.h;
  gradient.z() = (c1 - c0) / g.h;
  return c0 + fz * (c1 - c0);
}

void write_vtk(std::ostream& out, const PhaseField& u) {
  const Grid& g = u.grid;
  char buf[96];
  out << "# vtk DataFile Version 3.0\nplateau phase field\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx() << ' ' << g.ny() << ' ' << g.nz() << '\n';
  std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g %.17g\n", g.origin.x(), g.origin.y(), g.origin.z());
  out << buf;
  std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g %.17g\n", g.h, g.h, g.h);
  out << buf;
  out << "POINT_DATA " << g.node_count() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double value : u.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", value);
    out << buf;
  }
}

PhaseField read_vtk(std::istream& in) {
  std::string word;
  int dims[3] = {0, 0, 0};
  Vec3 origin = Vec3::Zero(), spacing = Vec3::Zero();
  std::size_t count = 0;
  while (in >> word) {
    if (word == "DIMENSIONS") {
      in >> dims[0] >> dims[1] >> dims[2];
    } else if (word == "ORIGIN") {
      in >> origin.x() >> origin.y() >> origin.z();
    } else if (word == "SPACING") {
      in >> spacing.x() >> spacing.y() >> spacing.z();
    } else if (word == "POINT_DATA") {
      in >> count;
    } else if (word == "LOOKUP_TABLE") {
      in >> word;
      break;
    }
  }
  if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2 || !(spacing.x() > 0.0)) {
    throw Error(ErrorKind::ParseError, "VTK header incomplete");
  }
  Grid g;
  g.origin = origin;
  g.h = spacing.x();
  g.dims = {dims[0] - 1, dims[1] - 1, dims[2] - 1};
  if (count != g.node_count()) throw Error(ErrorKind::ParseError, "VTK POINT_DATA count mismatch");
  PhaseField u{g, std::vector<double>(count)};
  for (std::size_t m = 0; m < count; ++m) {
    if (!(in >> u.values[m])) throw Error(ErrorKind::ParseError, "VTK data truncated");
  }
  return u;
}

}  // namespace plateau
