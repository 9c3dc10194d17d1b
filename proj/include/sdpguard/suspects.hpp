#pragma once

#include <optional>

#include "sdpguard/attack.hpp"

namespace sdpguard {

// Distances implied by reported positions, on the measurement support only.
class ReportedDistanceMatrix : public PairDistances {
 public:
  using PairDistances::PairDistances;
};

struct SuspectSets {
  IdSet suspected;  // M
  IdSet trusted;    // B
  bool is_partition_of(int n) const;
};

ReportedDistanceMatrix build_reported_matrix(const AttackedScenario& scenario);

// Measurement tolerance on squared ranges; (d/2)^2 unless overridden.
inline double measurement_tolerance(double comm_range, std::optional<double> override_sq = {}) {
  return override_sq ? *override_sq : 0.25 * comm_range * comm_range;
}

// Squared-range discrepancy of one directed entry.
inline double squared_discrepancy(double measured, double reported) {
  const double diff = measured * measured - reported * reported;
  return diff < 0.0 ? -diff : diff;
}

// Both endpoints of an entry are suspected when the entry has no reverse
// partner or its squared discrepancy reaches the tolerance.
SuspectSets initial_suspects(const ReportedDistanceMatrix& e_r, const MeasurementSet& e_n,
                             double comm_range, std::optional<double> tolerance_sq = {});

}  // namespace sdpguard
