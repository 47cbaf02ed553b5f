#pragma once

#include <functional>
#include <string>
#include <vector>

#include "plateau/coupling.hpp"
#include "plateau/field.hpp"
#include "plateau/geometry.hpp"
#include "plateau/params.hpp"
#include "plateau/sheet.hpp"

namespace plateau {

/// Exact gradient of surface_energy(sheet, u, delta) with respect to the
/// vertex positions; zero on the two boundary rows.
std::vector<Vec3> sheet_gradient(const HomotopySheet& sheet, const PhaseField& u, double delta);

struct DescentResult {
  HomotopySheet sheet;
  bool accepted = false;  // false: no admissible decreasing step (StepFailure)
  double energy_before = 0.0;
  double energy_after = 0.0;
  double max_displacement = 0.0;
  int backtracks = 0;
};

/// One projected-gradient sweep with Armijo backtracking on surface_energy.
/// Candidates are projected into the inner region and shrunk until their
/// Lipschitz estimate is at most the sheet's cap. Throws LambdaViolation if
/// the input already exceeds the cap.
DescentResult descend_sheet(const HomotopySheet& sheet, const PhaseField& u, const SolverParams& params,
                            const ConvexRegion& inner);

struct TraceRow {
  int iter = 0;
  EnergyReport energy;
  double area = 0.0;
  double lipschitz = 0.0;
  double ahlfors_sup = 0.0;
  bool ahlfors_flag = false;  // sup ratio exceeded the cap
};

enum class Termination { MaxOuter, Stalled, ZeroEnergy };
std::string to_string(Termination t);

struct RunResult {
  PhaseField u;
  HomotopySheet sheet;
  std::vector<TraceRow> trace;
  Termination reason = Termination::MaxOuter;
  double initial_area = 0.0;
};

struct RunOptions {
  int M = 64;
  int K = 256;
  bool monitor_ahlfors = true;
  int ahlfors_levels = 4;
  std::function<void(const TraceRow&)> on_iteration;
};

/// Alternating minimization: exact field solve for the current sheet, then
/// a fixed number of sheet descent sweeps for that field.
RunResult alternate_minimize(const Domain& domain, const CurveSpec& gamma0, const CurveSpec& gamma1,
                             const SolverParams& params, const RunOptions& options = {});

/// Same loop from a given initial sheet.
RunResult alternate_minimize(const Domain& domain, const HomotopySheet& initial, const SolverParams& params,
                             const RunOptions& options = {});

}  // namespace plateau
