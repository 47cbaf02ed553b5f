#include <algorithm>
#include <cmath>

#include "plateau/fragments.hpp"
#include "plateau/kernels.hpp"

namespace plateau::kernels {

int fragment_level(const Vec3& a, const Vec3& b, const Vec3& c, const Grid& grid) {
  return subdivision_level(triangle_diameter(a, b, c), 0.5 * grid.h);
}

void deposit(const Grid& grid, const Vec3& p, double amount, std::span<double> node_mass) {
  int cell[3];
  double f[3];
  for (int d = 0; d < 3; ++d) {
    double s = (p[d] - grid.origin[d]) / grid.h;
    // on a node plane up to rounding
    if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
    cell[d] = std::clamp(static_cast<int>(std::floor(s)), 0, grid.dims[d] - 1);
    f[d] = std::clamp(s - cell[d], 0.0, 1.0);
  }
  for (int dz = 0; dz < 2; ++dz) {
    const double wz = dz ? f[2] : 1.0 - f[2];
    for (int dy = 0; dy < 2; ++dy) {
      const double wy = dy ? f[1] : 1.0 - f[1];
      for (int dx = 0; dx < 2; ++dx) {
        const double wx = dx ? f[0] : 1.0 - f[0];
        node_mass[grid.index(cell[0] + dx, cell[1] + dy, cell[2] + dz)] += amount * wx * wy * wz;
      }
    }
  }
}

}  // namespace plateau::kernels
