#include <doctest.h>

#include <cmath>
#include <random>

#include "plateau/error.hpp"
#include "plateau/optimizer.hpp"

using namespace plateau;

namespace {

const Box kCylinderBox{Vec3(-1, -1, -0.5), Vec3(1, 1, 0.5)};

HomotopySheet annulus(int M, int K) {
  return init_sheet(sample_curve(CircleCurve{Vec3::Zero(), 0.5, Vec3::UnitZ()}, K),
                    sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, K), M, kCylinderBox, 4.0);
}

Grid wide_grid() { return make_grid(Box{Vec3(-1.5, -1.5, -1), Vec3(1.5, 1.5, 1)}, 0.05); }

PhaseField bumpy_field(const Grid& g) {
  PhaseField u = PhaseField::constant(g, 0.0);
  for (int k = 0; k <= g.dims[2]; ++k)
    for (int j = 0; j <= g.dims[1]; ++j)
      for (int i = 0; i <= g.dims[0]; ++i) {
        const Vec3 p = g.node(i, j, k);
        u.values[g.index(i, j, k)] = 0.4 + 0.3 * std::sin(3 * p.x() + p.z()) * std::cos(2 * p.y());
      }
  return u;
}

struct SmallRun {
  Domain domain = make_domain({Box{Vec3(-0.7, -0.7, -0.7), Vec3(0.7, 0.7, 0.7)},
                               Box{Vec3(-0.5, -0.5, -0.25), Vec3(0.5, 0.5, 0.25)}});
  SolverParams params = SolverParams::with_defaults(0.1, 2.0, 0.05);
  RunOptions options;
  SmallRun() {
    params.max_outer = 4;
    options.M = 16;
    options.K = 64;
  }
};

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("flat annulus is a critical point") {
    const Grid g = wide_grid();
    const double u0 = 0.6, delta = 0.05;
    const PhaseField u = PhaseField::constant(g, u0);
    const HomotopySheet s = annulus(16, 64);
    const std::vector<Vec3> grad = sheet_gradient(s, u, delta);
    for (int i = 1; i < 16; ++i)
      for (int j = 0; j < 64; ++j) CHECK(grad[s.index(i, j)].norm() <= 1e-3 * (u0 * u0 + delta));
    for (int j = 0; j < 64; ++j) CHECK(grad[s.index(0, j)].norm() == 0.0);

    SolverParams p = SolverParams::with_defaults(0.1, 4.0, 0.05);
    p.delta_eps = delta;
    const DescentResult d = descend_sheet(s, u, p, kCylinderBox);
    if (d.accepted) CHECK(d.max_displacement <= 1e-6);
    for (std::size_t n = 0; n < s.vertices().size(); ++n) CHECK((d.sheet.vertices()[n] - s.vertices()[n]).norm() <= 1e-6);
  }

  TEST_CASE("degenerate sheet has zero gradient") {
    const Ring unit = sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, 32);
    const HomotopySheet s = init_sheet(unit, unit, 4, kCylinderBox, 2.0);
    for (const Vec3& g : sheet_gradient(s, bumpy_field(wide_grid()), 0.1)) CHECK(g.norm() == 0.0);
  }

  TEST_CASE("gradient matches finite differences") {
    const Grid g = wide_grid();
    const PhaseField u = bumpy_field(g);
    HomotopySheet s = annulus(6, 24);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N;
    for (int i = 1; i < 6; ++i)
      for (int j = 0; j < 24; ++j) s.at(i, j) += 0.05 * Vec3(N(rng), N(rng), N(rng));
    const double delta = 0.05, step = 1e-6;
    const std::vector<Vec3> grad = sheet_gradient(s, u, delta);
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int n = s.index(1 + k % 5, 3 * k + 1);
      for (int d = 0; d < 3; ++d) {
        HomotopySheet a = s, b = s;
        a.vertices()[n][d] += step;
        b.vertices()[n][d] -= step;
        const double fd = (surface_energy(a, u, delta) - surface_energy(b, u, delta)) / (2 * step);
        worst = std::max(worst, std::abs(fd - grad[n][d]));
        scale = std::max(scale, std::abs(fd));
      }
    }
    CHECK(worst <= 1e-5 * std::max(scale, 1.0));
  }

  TEST_CASE("descent lowers the cylinder energy") {
    const Grid g = wide_grid();
    const PhaseField u = PhaseField::constant(g, 0.5);
    const HomotopySheet cyl = init_sheet(sample_curve(CircleCurve{Vec3(0, 0, -0.5), 1.0, Vec3::UnitZ()}, 64),
                                         sample_curve(CircleCurve{Vec3(0, 0, 0.5), 1.0, Vec3::UnitZ()}, 64), 16,
                                         kCylinderBox, 4.0);
    SolverParams p = SolverParams::with_defaults(0.1, 4.0, 0.05);
    const DescentResult d = descend_sheet(cyl, u, p, kCylinderBox);
    REQUIRE(d.accepted);
    CHECK(d.energy_after < d.energy_before);
    CHECK(surface_energy(d.sheet, u, p.delta_eps) < surface_energy(cyl, u, p.delta_eps));
    for (const Vec3& v : d.sheet.vertices()) CHECK(contains(ConvexRegion(kCylinderBox), v, 1e-9));
  }

  TEST_CASE("lambda below the initial estimate") {
    const Grid g = wide_grid();
    HomotopySheet s = annulus(8, 32);
    s.set_lambda_cap(0.5);
    try {
      descend_sheet(s, PhaseField::constant(g, 0.5), SolverParams::with_defaults(0.1, 0.5, 0.05), kCylinderBox);
      FAIL("expected LambdaViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LambdaViolation);
    }
  }

  TEST_CASE("degenerate configuration terminates at zero energy") {
    const Domain d = make_domain({Box{Vec3(-2, -2, -2), Vec3(2, 2, 2)}, Ball{Vec3::Zero(), 1.0}});
    const CircleCurve c{Vec3::Zero(), 1.0, Vec3::UnitZ()};
    RunOptions o;
    o.M = 8;
    o.K = 32;
    const RunResult r = alternate_minimize(d, c, c, SolverParams::with_defaults(0.2, 2.0, 0.1), o);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].energy.total == 0.0);
    CHECK(r.reason == Termination::ZeroEnergy);
    for (double v : r.u.values) CHECK(v == 1.0);
  }

  TEST_CASE("frustum run keeps constraints and descends") {
    SmallRun s;
    const RunResult r = alternate_minimize(s.domain, CircleCurve{Vec3(0, 0, 0.25), 0.3, Vec3::UnitZ()},
                                           CircleCurve{Vec3(0, 0, -0.25), 0.45, Vec3::UnitZ()}, s.params, s.options);
    REQUIRE(!r.trace.empty());
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      CHECK(r.trace[k].lipschitz <= s.params.lambda_cap * (1 + 1e-9));
      if (k > 0) CHECK(r.trace[k].energy.total <= r.trace[k - 1].energy.total * (1 + 1e-8));
    }
    for (const Vec3& v : r.sheet.vertices()) CHECK(contains(s.domain.inner_region, v, 1e-9));
    CHECK(r.trace.back().area < r.initial_area);
  }

  TEST_CASE("final field is a fixed point of the u-step") {
    SmallRun s;
    s.params.max_outer = 8;
    const RunResult r = alternate_minimize(s.domain, CircleCurve{Vec3(0, 0, 0.25), 0.25, Vec3::UnitZ()},
                                           CircleCurve{Vec3(0, 0, 0.25), 0.5, Vec3::UnitZ()}, s.params, s.options);
    const Grid g = make_grid(s.domain, s.params.h);
    const PhaseField again = solve_phase_field(g, splat_measure(r.sheet, g), s.params, s.params.cg_tol);
    const double before = r.trace.back().energy.total;
    const double after = total_energy(again, r.sheet, s.params).total;
    MESSAGE("termination " << to_string(r.reason) << ", relative change " << std::abs(after - before) / before);
    CHECK(std::abs(after - before) <= 2 * s.params.cg_tol * before);
  }
}
