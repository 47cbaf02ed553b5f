#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "plateau/error.hpp"
#include "plateau/sheet.hpp"

using namespace plateau;
using std::numbers::pi;

namespace {

const ConvexRegion kBigBox = Box{Vec3(-2, -2, -2), Vec3(2, 2, 2)};

HomotopySheet annulus(int M, int K, double r0 = 0.5, double r1 = 1.0) {
  return init_sheet(sample_curve(CircleCurve{Vec3::Zero(), r0, Vec3::UnitZ()}, K),
                    sample_curve(CircleCurve{Vec3::Zero(), r1, Vec3::UnitZ()}, K), M, kBigBox, 4.0);
}

HomotopySheet cylinder(int M, int K) {
  return init_sheet(sample_curve(CircleCurve{Vec3(0, 0, -0.5), 1.0, Vec3::UnitZ()}, K),
                    sample_curve(CircleCurve{Vec3(0, 0, 0.5), 1.0, Vec3::UnitZ()}, K), M, kBigBox, 4.0);
}

// Stacked polar disks, centre vertex first.
TriangleMesh disk_mesh(double z, double R, int nr, int nt, TriangleMesh m = {}) {
  const int base = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, 0, z);
  for (int i = 1; i <= nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const double r = R * i / nr, th = 2 * pi * j / nt;
      m.vertices.emplace_back(r * std::cos(th), r * std::sin(th), z);
    }
  auto id = [&](int i, int j) { return base + 1 + (i - 1) * nt + (j % nt); };
  for (int j = 0; j < nt; ++j) m.triangles.push_back({base, id(1, j), id(1, j + 1)});
  for (int i = 1; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

}  // namespace

TEST_SUITE("sheet") {
  TEST_CASE("init_sheet examples") {
    const Ring unit = sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, 32);
    const HomotopySheet deg = init_sheet(unit, unit, 4, kBigBox, 2.0);
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; j < 32; ++j) CHECK(deg.at(i, j) == unit[j]);
    CHECK(sheet_area(deg) == 0.0);

    const HomotopySheet flat = annulus(8, 32);
    for (const Vec3& p : flat.vertices()) CHECK(p.z() == 0.0);

    const HomotopySheet cyl = cylinder(4, 32);
    for (int i = 0; i <= 4; ++i) CHECK(cyl.at(i, 7).z() == doctest::Approx(-0.5 + 0.25 * i));
  }

  TEST_CASE("init_sheet errors") {
    const Ring a = sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, 32);
    const Ring b = sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, 16);
    CHECK_THROWS_AS(init_sheet(a, b, 4, kBigBox, 2.0), Error);
    try {
      init_sheet(a, b, 4, kBigBox, 2.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RingMismatch);
    }
    try {
      init_sheet(a, a, 4, Ball{Vec3::Zero(), 0.5}, 2.0);
      FAIL("expected OutsideC0");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutsideC0);
    }
  }

  TEST_CASE("sheet_area examples") {
    CHECK(sheet_area(annulus(64, 256)) == doctest::Approx(pi * 0.75).epsilon(0.005));
    CHECK(sheet_area(cylinder(64, 256)) == doctest::Approx(2 * pi).epsilon(0.005));
  }

  TEST_CASE("sheet_area converges at second order in K") {
    const double exact = pi * 0.75;
    const double e64 = std::abs(sheet_area(annulus(8, 64)) - exact);
    const double e128 = std::abs(sheet_area(annulus(8, 128)) - exact);
    const double ratio = e64 / e128;
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 8.0);
  }

  TEST_CASE("sheet_area is invariant under rigid motions") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    HomotopySheet s = annulus(16, 64);
    for (auto& p : s.vertices()) p += 0.05 * Vec3(N(rng), N(rng), N(rng));
    const double a0 = sheet_area(s);
    for (int k = 0; k < 100; ++k) {
      const Eigen::Quaterniond q = Eigen::Quaterniond(N(rng), N(rng), N(rng), N(rng)).normalized();
      const Vec3 t(N(rng), N(rng), N(rng));
      HomotopySheet moved = s;
      for (auto& p : moved.vertices()) p = q * p + t;
      CHECK(std::abs(sheet_area(moved) - a0) <= 1e-12 * a0);
    }
  }

  TEST_CASE("lipschitz_estimate examples") {
    const HomotopySheet cyl =
        sheet_from_map(64, 256, 4.0, [](double t, double th) { return Vec3(std::cos(th), std::sin(th), t); });
    CHECK(lipschitz_estimate(cyl) == doctest::Approx(1.0).epsilon(0.01));

    // only the theta difference survives: chord / angle step
    const int K = 256;
    const Ring unit = sample_curve(CircleCurve{Vec3::Zero(), 1.0, Vec3::UnitZ()}, K);
    const double oracle = 2 * std::sin(pi / K) / (2 * pi / K);
    CHECK(lipschitz_estimate(init_sheet(unit, unit, 4, kBigBox, 2.0)) == doctest::Approx(oracle).epsilon(1e-9));

    CHECK(lipschitz_estimate(annulus(64, 256)) == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("lipschitz_estimate grows when an interior vertex leaves the plane") {
    const HomotopySheet base = annulus(16, 64);
    const double l0 = lipschitz_estimate(base);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> row(1, 15), col(0, 63);
    std::uniform_real_distribution<double> dz(-0.2, 0.2);
    for (int k = 0; k < 100; ++k) {
      HomotopySheet s = base;
      s.at(row(rng), col(rng)).z() += dz(rng);
      CHECK(lipschitz_estimate(s) >= l0);
    }
  }

  TEST_CASE("ahlfors ratio on the flat annulus") {
    const HomotopySheet s = annulus(16, 64);
    const AhlforsReport r = ahlfors_ratio(s, RadiusSequence{0.1, 3});
    CHECK(r.sup_ratio <= 1.02);
    CHECK(r.sup_ratio >= 0.9);
    CHECK(std::isfinite(r.sup_ratio));
  }

  TEST_CASE("ahlfors ratio on the unit sphere") {
    const double tiny = 1e-3;
    const HomotopySheet sphere = sheet_from_map(64, 256, 8.0, [&](double t, double th) {
      const double phi = tiny + (pi - 2 * tiny) * t;
      return Vec3(std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi));
    });
    const TriangleMesh mesh = to_mesh(sphere);
    // equator and mid-latitude centres; the cap in B(x, r) has area pi r^2
    const std::vector<int> centers = {sphere.index(32, 0), sphere.index(16, 40), sphere.index(48, 100)};
    for (double r : {0.5, 0.25}) {
      const AhlforsReport a = ahlfors_ratio(mesh, centers, RadiusSequence{r, 1});
      CHECK(a.sup_ratio == doctest::Approx(1.0).epsilon(0.05));
    }
  }

  TEST_CASE("ahlfors ratio on two stacked disks") {
    const TriangleMesh two = disk_mesh(0.05, 1.0, 32, 128, disk_mesh(0.0, 1.0, 32, 128));
    const double oracle = (pi * 0.25 + pi * (0.25 - 0.05 * 0.05)) / (pi * 0.25);
    const AhlforsReport a = ahlfors_ratio(two, {0}, RadiusSequence{0.5, 1});
    CHECK(a.sup_ratio == doctest::Approx(oracle).epsilon(0.05));
    CHECK(a.sup_ratio == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("ball_area_subdivided on a flat disk") {
    const TriangleMesh d = disk_mesh(0.0, 1.0, 32, 128);
    CHECK(ball_area_subdivided(d, Vec3(0.2, 0.1, 0.0), 0.3) == doctest::Approx(pi * 0.09).epsilon(0.02));
    CHECK(ball_area_subdivided(d, Vec3(0, 0, 0.2), 0.3) == doctest::Approx(pi * 0.05).epsilon(0.02));
  }

  TEST_CASE("triangulation uses the shorter diagonal") {
    // cell stretched so that (0,1)-(1,0) is shorter
    std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0),
                           Vec3(-1, 1, 0), Vec3(0.2, 1, 0), Vec3(1, 1, 0)};
    const HomotopySheet s(1, 3, 10.0, v);
    const auto tris = triangulate(s);
    CHECK(tris.size() == 6);
    bool uses_short = false;
    for (const auto& t : tris) {
      const bool has1 = t[0] == 1 || t[1] == 1 || t[2] == 1;
      const bool has3 = t[0] == 3 || t[1] == 3 || t[2] == 3;
      uses_short = uses_short || (has1 && has3);
    }
    CHECK_FALSE(uses_short);  // (0,1)=v1 to (1,0)=v3 is the long one here
  }

  TEST_CASE("obj round trip") {
    HomotopySheet s = annulus(4, 16);
    s.at(2, 3).z() = 0.123456789012345678;
    std::stringstream io;
    write_obj(io, s);
    const HomotopySheet back = read_obj(io);
    CHECK(back.M() == 4);
    CHECK(back.K() == 16);
    CHECK(back.lambda_cap() == s.lambda_cap());
    CHECK(back.vertices() == s.vertices());
  }
}
