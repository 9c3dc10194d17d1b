#include "sdpguard/suspects.hpp"

#include <stdexcept>

namespace sdpguard {

bool SuspectSets::is_partition_of(int n) const {
  if (static_cast<int>(suspected.size() + trusted.size()) != n) return false;
  for (int id : suspected)
    if (id < 0 || id >= n || trusted.count(id)) return false;
  for (int id : trusted)
    if (id < 0 || id >= n) return false;
  return true;
}

ReportedDistanceMatrix build_reported_matrix(const AttackedScenario& scenario) {
  const Swarm& s = scenario.swarm;
  ReportedDistanceMatrix out(s.size());
  for (const auto& [p, r] : scenario.measurements.entries()) {
    const double e = (s.uavs[p.from].reported_pos - s.uavs[p.to].reported_pos).norm();
    // coincident reports give a zero distance, which the sparse map rejects
    out.set(p.from, p.to, std::max(e, kMinMeasuredDistance));
  }
  return out;
}

SuspectSets initial_suspects(const ReportedDistanceMatrix& e_r, const MeasurementSet& e_n,
                             double comm_range, std::optional<double> tolerance_sq) {
  if (e_r.size() != e_n.size()) throw std::invalid_argument("matrix sizes differ");
  if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be positive");
  const double tol = measurement_tolerance(comm_range, tolerance_sq);

  SuspectSets out;
  auto flag = [&](const DirectedPair& p) {
    out.suspected.insert(p.from);
    out.suspected.insert(p.to);
  };
  for (const auto& [p, r] : e_n.entries()) {
    const auto e = e_r.find(p.from, p.to);
    if (!e || !e_n.contains(p.to, p.from) || squared_discrepancy(r, *e) >= tol) flag(p);
  }
  for (const auto& [p, e] : e_r.entries())
    if (!e_n.contains(p.from, p.to)) flag(p);

  for (int i = 0; i < e_n.size(); ++i)
    if (!out.suspected.count(i)) out.trusted.insert(i);
  return out;
}

}  // namespace sdpguard
