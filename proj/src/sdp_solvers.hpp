#pragma once

#include "sdpguard/sdp.hpp"

namespace sdpguard::detail {

// Solver back-ends fill status-independent fields: phase1_slack, lifted,
// iterations, and set message on breakdown. `converged` false forces Unknown.
struct SolverOutput {
  double t_star = 0.0;
  MatrixX<double> Z;
  int iterations = 0;
  bool converged = true;
  std::string message;
};

SolverOutput solve_node_reduction(const FeasibilityProblem& problem, const OracleOptions& options);
SolverOutput solve_lifted_admm(const FeasibilityProblem& problem, const OracleOptions& options);

// Upper bound of the functional of a directed pair after folding the range and
// measurement-upper rows together, and its lower bound.
struct PairBounds {
  double lo = 0.0;
  double hi = 0.0;
};
PairBounds pair_bounds(const FeasibilityProblem& problem, const ConstraintPair& pair);

}  // namespace sdpguard::detail
