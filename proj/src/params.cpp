#include "plateau/params.hpp"

#include <cmath>

namespace plateau {

SolverParams SolverParams::with_defaults(double epsilon, double lambda_cap, double h) {
  SolverParams p;
  p.epsilon = epsilon;
  p.c_eps = std::sqrt(epsilon);
  p.delta_eps = epsilon;
  p.lambda_cap = lambda_cap;
  p.h = h;
  return p;
}

}  // namespace plateau
