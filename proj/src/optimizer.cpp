#include "plateau/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "plateau/error.hpp"
#include "plateau/fragments.hpp"
#include "plateau/kernels.hpp"

namespace plateau {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::MaxOuter: return "max_outer";
    case Termination::Stalled: return "stalled";
    case Termination::ZeroEnergy: return "zero_energy";
  }
  return "unknown";
}

std::vector<Vec3> sheet_gradient(const HomotopySheet& sheet, const PhaseField& u, double delta) {
  require_inside_grid(sheet.vertices(), u.grid);
  const std::vector<Triangle> tris = triangulate(sheet);
  const auto& v = sheet.vertices();
  const long nt = static_cast<long>(tris.size());
  std::vector<std::array<Vec3, 3>> local(nt);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    const Vec3& a = v[tris[t][0]];
    const Vec3& b = v[tris[t][1]];
    const Vec3& c = v[tris[t][2]];
    const Vec3 n = (b - a).cross(c - a);
    const double area = 0.5 * n.norm();
    if (area < kDegenerateArea) {
      local[t] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
      continue;
    }
    const int level = kernels::fragment_level(a, b, c, u.grid);
    const double scale = std::ldexp(1.0, -2 * level);
    double weight_sum = 0.0;
    Vec3 ga = Vec3::Zero(), gb = Vec3::Zero(), gc = Vec3::Zero();
    for_each_fragment_centroid(level, [&](double w0, double w1, double w2) {
      Vec3 grad;
      const double s = sample_field_gradient(u, Vec3(a + w1 * (b - a) + w2 * (c - a)), grad);
      weight_sum += s * s + delta;
      const Vec3 g2 = 2.0 * s * grad;
      ga += w0 * g2;
      gb += w1 * g2;
      gc += w2 * g2;
    });
    const Vec3 nh = n / n.norm();
    const double wa = scale * weight_sum;
    const double fa = scale * area;
    local[t] = {wa * 0.5 * nh.cross(c - b) + fa * ga, wa * 0.5 * nh.cross(a - c) + fa * gb,
                wa * 0.5 * nh.cross(b - a) + fa * gc};
  }
  std::vector<Vec3> grad(v.size(), Vec3::Zero());
  for (long t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) grad[tris[t][k]] += local[t][k];
  }
  for (int j = 0; j < sheet.K(); ++j) {
    grad[sheet.index(0, j)].setZero();
    grad[sheet.index(sheet.M(), j)].setZero();
  }
  return grad;
}

DescentResult descend_sheet(const HomotopySheet& sheet, const PhaseField& u, const SolverParams& params,
                            const ConvexRegion& inner) {
  const double cap = sheet.lambda_cap();
  const double lip0 = lipschitz_estimate(sheet);
  if (lip0 > cap * (1.0 + 1e-9)) {
    throw Error(ErrorKind::LambdaViolation,
                "sheet Lipschitz estimate " + std::to_string(lip0) + " exceeds cap " + std::to_string(cap));
  }
  DescentResult result{sheet, false, 0.0, 0.0, 0.0, 0};
  const double e0 = surface_energy(sheet, u, params.delta_eps);
  result.energy_before = result.energy_after = e0;

  const std::vector<Vec3> g = sheet_gradient(sheet, u, params.delta_eps);
  double gmax = 0.0;
  for (const Vec3& gv : g) gmax = std::max(gmax, gv.norm());
  const double first_step = params.initial_step * u.grid.h;
  // Nothing to gain beyond rounding: treat as a critical point.
  if (!(gmax * first_step > 1e-14 * std::abs(e0))) return result;

  double alpha = first_step / gmax;
  const auto& x = sheet.vertices();
  for (int attempt = 0; attempt <= params.max_backtracks; ++attempt, alpha *= params.armijo_shrink) {
    HomotopySheet cand = sheet;
    auto& y = cand.vertices();
    double slope = 0.0;
    for (int i = 1; i < sheet.M(); ++i) {
      for (int j = 0; j < sheet.K(); ++j) {
        const int n = sheet.index(i, j);
        y[n] = project_into(inner, x[n] - alpha * g[n]);
        slope += g[n].dot(y[n] - x[n]);
      }
    }
    if (lipschitz_estimate(cand) > cap) continue;
    const double e1 = surface_energy(cand, u, params.delta_eps);
    if (e1 < e0 && e1 <= e0 + params.armijo_slope * slope) {
      double disp = 0.0;
      for (std::size_t n = 0; n < x.size(); ++n) disp = std::max(disp, (y[n] - x[n]).norm());
      result = DescentResult{std::move(cand), true, e0, e1, disp, attempt};
      return result;
    }
  }
  result.backtracks = params.max_backtracks + 1;
  return result;
}

namespace {

TraceRow make_row(int iter, const PhaseField& u, const HomotopySheet& sheet, const SolverParams& params,
                  const RunOptions& options) {
  TraceRow row;
  row.iter = iter;
  row.energy = total_energy(u, sheet, params);
  row.area = sheet_area(sheet);
  row.lipschitz = lipschitz_estimate(sheet);
  if (options.monitor_ahlfors && row.area > 0.0) {
    const double diam = bounding_diameter(sheet.vertices());
    const AhlforsReport a = ahlfors_ratio(sheet, RadiusSequence{diam / 8.0, options.ahlfors_levels});
    row.ahlfors_sup = a.sup_ratio;
    row.ahlfors_flag = a.sup_ratio > sheet.lambda_cap();
  }
  return row;
}

}  // namespace

RunResult alternate_minimize(const Domain& domain, const HomotopySheet& initial, const SolverParams& params,
                             const RunOptions& options) {
  const Grid grid = make_grid(domain, params.h);
  if (lipschitz_estimate(initial) > initial.lambda_cap() * (1.0 + 1e-9)) {
    throw Error(ErrorKind::LambdaViolation, "initial sheet exceeds the Lipschitz cap");
  }
  RunResult result{PhaseField::constant(grid, 1.0), initial, {}, Termination::MaxOuter, sheet_area(initial)};
  int stall = 0;
  double previous = 0.0;
  for (int iter = 0; iter < params.max_outer; ++iter) {
    const SurfaceMeasure measure = splat_measure(result.sheet, grid);
    result.u = solve_phase_field(grid, measure, params, params.cg_tol, nullptr, &result.u);
    for (int sweep = 0; sweep < params.sheet_sweeps; ++sweep) {
      DescentResult step = descend_sheet(result.sheet, result.u, params, domain.inner_region);
      if (!step.accepted) break;
      result.sheet = std::move(step.sheet);
    }
    TraceRow row = make_row(iter, result.u, result.sheet, params, options);
    result.trace.push_back(row);
    if (options.on_iteration) options.on_iteration(row);

    const double total = row.energy.total;
    if (total == 0.0) {
      result.reason = Termination::ZeroEnergy;
      break;
    }
    if (iter > 0) {
      const double rel = (previous - total) / std::abs(previous);
      stall = rel < 1e-10 ? stall + 1 : 0;
      if (stall >= 3) {
        result.reason = Termination::Stalled;
        break;
      }
    }
    previous = total;
  }
  return result;
}

RunResult alternate_minimize(const Domain& domain, const CurveSpec& gamma0, const CurveSpec& gamma1,
                             const SolverParams& params, const RunOptions& options) {
  const Ring ring0 = sample_curve(gamma0, options.K);
  const Ring ring1 = sample_curve(gamma1, options.K);
  require_on_boundary(domain.inner_region, ring0);
  require_on_boundary(domain.inner_region, ring1);
  require_separated(ring0, ring1);
  const HomotopySheet initial = init_sheet(ring0, ring1, options.M, domain.inner_region, params.lambda_cap);
  return alternate_minimize(domain, initial, params, options);
}

}  // namespace plateau
