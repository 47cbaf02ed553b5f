#pragma once

#include <span>

#include "plateau/field.hpp"
#include "plateau/sheet.hpp"

// Hot loops, each in two flavours: a plain serial reference kept for
// testing and an OpenMP version used by the library. The OpenMP versions
// reduce over fixed-size blocks so results do not depend on thread count.
namespace plateau::kernels {

/// Coefficients of the SPD operator acting on v = 1 - u at interior nodes:
///   (A v)_n = edge * (6 v_n - sum_interior_nbrs v_m) + (mass + coupling_n) v_n.
/// Dirichlet entries of x are ignored; Dirichlet entries of y are set to 0.
struct FieldOperator {
  const Grid* grid = nullptr;
  double edge = 0.0;                       // eps * h
  double mass = 0.0;                       // h^3 / (4 eps)
  std::span<const double> coupling;        // w_n / c_eps, full node array
};

namespace serial {
void apply_operator(const FieldOperator& op, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void splat(const TriangleMesh& mesh, const Grid& grid, std::span<double> node_mass);
double weighted_area(const TriangleMesh& mesh, const PhaseField& u, double delta);
}  // namespace serial

namespace omp {
void apply_operator(const FieldOperator& op, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void splat(const TriangleMesh& mesh, const Grid& grid, std::span<double> node_mass);
double weighted_area(const TriangleMesh& mesh, const PhaseField& u, double delta);
}  // namespace omp

/// Fragment level used for surface quadrature and splatting on `grid`:
/// fragments have diameter < h / 2.
int fragment_level(const Vec3& a, const Vec3& b, const Vec3& c, const Grid& grid);

/// Adds trilinear weights * amount at point p to the 8 surrounding nodes.
void deposit(const Grid& grid, const Vec3& p, double amount, std::span<double> node_mass);

}  // namespace plateau::kernels
