#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateau/analysis.hpp"
#include "plateau/geometry.hpp"
#include "plateau/params.hpp"

namespace plateau {

enum class Mode { Solve, Analyze, LscTest, Sweep };

std::string to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string& text);

/// Everything a run needs. Sections of the config file:
///   [domain]  outer = lo_x lo_y lo_z hi_x hi_y hi_z
///             inner = box lo.. hi..  |  ball cx cy cz r
///   [curves]  gamma0 / gamma1 = circle cx cy cz r ax ay az  |  polyline x y z; x y z; ...
///   [solver]  epsilon h lambda c_eps delta_eps cg_tol max_outer sheet_sweeps
///   [run]     mode M K seed monitor_ahlfors ahlfors_levels alpha pairs
///             generator terms r_inner r_outer sheet_M sheet_K eps_list out
struct RunConfig {
  Mode mode = Mode::Solve;
  std::optional<DomainSpec> domain;
  std::vector<CurveSpec> curves;
  SolverParams params;
  bool c_eps_set = false;
  bool delta_eps_set = false;
  int M = 64;
  int K = 256;
  std::uint64_t seed = 0;
  bool monitor_ahlfors = true;
  int ahlfors_levels = 4;
  std::string out_dir = "out";
  // analyze
  double alpha = 0.5;
  long pairs = 100000;
  // lsc-test
  std::string generator = "wrinkle";
  int terms = 32;
  AnnulusSpec annulus;
  // sweep
  std::vector<double> eps_list;
};

/// Parses the key-value text; ParseError carries the line number. The mode
/// override (from the command line) takes precedence over [run] mode.
/// Validation runs for the resulting mode; failures are ValidationError with
/// the offending field as detail.
RunConfig parse_config_text(const std::string& text, std::optional<Mode> mode_override = std::nullopt);
RunConfig parse_config(const std::string& path, std::optional<Mode> mode_override = std::nullopt);

void validate(const RunConfig& config);

}  // namespace plateau
