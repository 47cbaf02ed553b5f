#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "plateau/coupling.hpp"
#include "plateau/error.hpp"
#include "plateau/field.hpp"

using namespace plateau;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::IoError;
}

// Small tilted patch, off the grid planes, for generic measures.
struct Fixture {
  Grid grid = make_grid(Box{Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)}, 0.05);
  SolverParams params = SolverParams::with_defaults(0.1, 4.0, 0.05);
  SurfaceMeasure measure;
  Fixture() {
    TriangleMesh m = oracle::plane_patch(-0.3, 0.3, -0.3, 0.3, 0.0, 12, 12);
    for (auto& p : m.vertices) p.z() = 0.013 + 0.2 * p.x() - 0.1 * p.y();
    measure = splat_measure(m, grid);
    params.cg_tol = 1e-12;
  }
};

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("make_grid examples") {
    CHECK(make_grid(Box{Vec3(-2, -2, -2), Vec3(2, 2, 2)}, 0.125).dims == std::array<int, 3>{32, 32, 32});
    CHECK(kind_of([] { make_grid(Box{Vec3(-2, -2, -2), Vec3(2, 2, 2)}, 0.3); }) ==
          ErrorKind::NonConformingSpacing);
    CHECK(make_grid(Box{Vec3(0, 0, 0), Vec3(1, 1, 2)}, 0.25).dims == std::array<int, 3>{4, 4, 8});
  }

  TEST_CASE("zero measure gives u = 1 and zero energy") {
    const Grid g = make_grid(Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, 0.1);
    const SolverParams p = SolverParams::with_defaults(0.2, 2.0, 0.1);
    const SurfaceMeasure zero = SurfaceMeasure::zero(g);
    const PhaseField u = solve_phase_field(g, zero, p, 1e-8);
    for (double v : u.values) CHECK(v == 1.0);
    CHECK(quadratic_energy(u, zero, p).total() == 0.0);
  }

  TEST_CASE("planar measure matches the separable oracle") {
    const double eps = 0.05, h = 0.025;
    const Grid g = make_grid(Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, h);
    SolverParams p = SolverParams::with_defaults(eps, 2.0, h);
    const SurfaceMeasure m = splat_measure(oracle::plane_patch(-1, 1, -1, 1, 0.0, 80, 80), g);
    const int layer = g.dims[2] / 2;
    // interior nodes of the mid layer all carry h^2
    const double w = m.node_mass[g.index(g.dims[0] / 2, g.dims[1] / 2, layer)];
    CHECK(w == doctest::Approx(h * h).epsilon(1e-12));
    const PhaseField u = solve_phase_field(g, m, p, 1e-11);
    const std::vector<double> ref = oracle::separable_oracle(g, layer, w, eps, p.c_eps);
    double err = 0.0;
    for (int k = 0; k <= g.dims[2]; ++k)
      for (int j = 1; j < g.dims[1]; ++j)
        for (int i = 1; i < g.dims[0]; ++i) {
          const std::size_t n = g.index(i, j, k);
          err = std::max(err, std::abs(u.values[n] - ref[n]));
        }
    CHECK(err <= 1e-6);
  }

  TEST_CASE("resolution and convergence errors") {
    const Grid g = make_grid(Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, 0.25);
    const SolverParams p = SolverParams::with_defaults(0.2, 2.0, 0.25);
    CHECK(kind_of([&] { solve_phase_field(g, SurfaceMeasure::zero(g), p, 1e-8); }) ==
          ErrorKind::ResolutionTooCoarse);
  }

  TEST_CASE("discrete maximum principle") {
    Fixture f;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      SurfaceMeasure m = SurfaceMeasure::zero(f.grid);
      for (auto& w : m.node_mass) w = U(rng) < 0.05 ? 10.0 * U(rng) * f.grid.h * f.grid.h : 0.0;
      const PhaseField u = solve_phase_field(f.grid, m, f.params, 1e-12);
      const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
      CHECK(*lo >= -1e-10);
      CHECK(*hi <= 1.0 + 1e-10);
    }
  }

  TEST_CASE("solution minimizes the discrete energy") {
    Fixture f;
    const PhaseField u = solve_phase_field(f.grid, f.measure, f.params, 1e-12);
    const double e0 = quadratic_energy(u, f.measure, f.params).total();
    std::mt19937_64 rng(9);
    std::normal_distribution<double> N;
    for (int k = 0; k < 100; ++k) {
      PhaseField v = u;
      const double scale = std::pow(10.0, -1.0 - 4.0 * k / 100.0);
      for (int kk = 0; kk <= f.grid.dims[2]; ++kk)
        for (int j = 0; j <= f.grid.dims[1]; ++j)
          for (int i = 0; i <= f.grid.dims[0]; ++i) {
            if (!f.grid.is_boundary(i, j, kk)) v.values[f.grid.index(i, j, kk)] += scale * N(rng);
          }
      CHECK(quadratic_energy(v, f.measure, f.params).total() >= e0 - 1e-12 * e0);
    }
  }

  TEST_CASE("more measure never raises u") {
    Fixture f;
    SurfaceMeasure doubled = f.measure;
    for (auto& w : doubled.node_mass) w *= 2.0;
    doubled.total *= 2.0;
    const PhaseField u1 = solve_phase_field(f.grid, f.measure, f.params, 1e-12);
    const PhaseField u2 = solve_phase_field(f.grid, doubled, f.params, 1e-12);
    for (std::size_t n = 0; n < u1.values.size(); ++n) CHECK(u2.values[n] <= u1.values[n] + 1e-10);
  }

  TEST_CASE("coupling form is symmetric and nonnegative") {
    Fixture f;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (int k = 0; k < 20; ++k) {
      double uv = 0.0, vu = 0.0, uu = 0.0;
      for (std::size_t n = 0; n < f.measure.node_mass.size(); ++n) {
        const double w = f.measure.node_mass[n], a = N(rng), b = N(rng);
        uv += w * (a * b);
        vu += w * (b * a);
        uu += w * (a * a);
      }
      CHECK(uv == vu);
      CHECK(uu >= 0.0);
    }
  }

  TEST_CASE("sample_field examples") {
    const Grid g = make_grid(Box{Vec3(0, 0, 0), Vec3(1, 1, 1)}, 0.1);
    const PhaseField one = PhaseField::constant(g, 1.0);
    CHECK(sample_field(one, Vec3(0.33, 0.71, 0.05)) == 1.0);
    PhaseField ramp = PhaseField::constant(g, 0.0);
    for (int k = 0; k <= 10; ++k)
      for (int j = 0; j <= 10; ++j)
        for (int i = 0; i <= 10; ++i) ramp.values[g.index(i, j, k)] = g.node(i, j, k).x();
    CHECK(std::abs(sample_field(ramp, Vec3(0.3, 0.47, 0.81)) - 0.3) <= 1e-12);
    Vec3 grad;
    sample_field_gradient(ramp, Vec3(0.37, 0.2, 0.9), grad);
    CHECK((grad - Vec3::UnitX()).norm() <= 1e-12);
    CHECK(kind_of([&] { sample_field(one, Vec3(1.2, 0.5, 0.5)); }) == ErrorKind::OutOfDomain);
  }

  TEST_CASE("vtk round trip") {
    Fixture f;
    const PhaseField u = solve_phase_field(f.grid, f.measure, f.params, 1e-10);
    std::stringstream io;
    write_vtk(io, u);
    const PhaseField back = read_vtk(io);
    CHECK(back.grid.dims == u.grid.dims);
    CHECK(back.grid.h == u.grid.h);
    CHECK(back.values == u.values);
  }
}
