#pragma once

namespace plateau {

/// Numerical parameters shared by the field solve and the sheet descent.
struct SolverParams {
  double epsilon = 0.0;
  double c_eps = 0.0;
  double delta_eps = 0.0;
  double lambda_cap = 0.0;
  double h = 0.0;
  double cg_tol = 1e-8;
  int max_outer = 50;
  int sheet_sweeps = 20;
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double initial_step = 0.1;  // as a fraction of h
  int max_backtracks = 30;

  /// Default schedule: c_eps = sqrt(eps), delta_eps = eps.
  static SolverParams with_defaults(double epsilon, double lambda_cap, double h);

  /// Hypothesis of the decay lemmas: 11 eps < eta0 / 4.
  bool lemma_regime(double eta0) const { return 11.0 * epsilon < eta0 / 4.0; }
};

}  // namespace plateau
