#pragma once

// Reference computations that share no code with the library under test.

#include <optional>
#include <vector>

#include "sdpguard/sdp.hpp"

namespace sdpguard::ref {

// Searches explicit positions satisfying the original (unrelaxed) constraint
// set on every node: range, measurement tolerance and ε-displacement. The
// problem separates per node, so each node gets a dense grid of spacing
// comm_range/100 over the ε-box around its report, and the best grid points
// are polished with projected least squares on the hinge violations.
struct BruteForceResult {
  bool satisfiable = false;
  std::vector<Position3> witness;  // aligned with node_order when satisfiable
  double worst_violation = 0.0;    // max over nodes of the best violation found
};
BruteForceResult brute_force(const FeasibilityProblem& problem);

// Largest violation of the original constraints by explicit positions.
double position_violation(const FeasibilityProblem& problem, const std::vector<Position3>& x);

// Monte-Carlo estimate of the expected number of other UAVs within d of a
// UAV when n are uniform in [-h, h]^3.
double expected_neighbors(int n, double d, double h, int samples, unsigned seed);

// E[recall] of a uniform sample of min(m, |S|) ids from S against truth.
double hypergeometric_recall(int set_size, int hits_in_set, int m, int truth_size);

}  // namespace sdpguard::ref
