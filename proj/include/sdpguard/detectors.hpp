#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdpguard/sdp.hpp"

namespace sdpguard {

// Which UAVs form W_k around a suspect k.
enum class NeighborhoodRule {
  kReportedGeometry,  // reported positions within d of k's report
  kMeasured,          // symmetrized measurement neighbours
  kUnion,
};

enum class UnknownPolicy {
  kTreatAsInfeasible,
  kSkipAndRetry,  // no verdict is cached, the check is repeated on later passes
};

// kNeighborhoodFirst runs plain CDI passes to a fixpoint before individual
// checks are enabled, which keeps E-CDI's final suspect set inside CDI's.
// kInterleaved tries individuals right after each failed neighbourhood check.
enum class EcdiSchedule { kNeighborhoodFirst, kInterleaved };

std::string to_string(NeighborhoodRule rule);
NeighborhoodRule neighborhood_rule_from_string(const std::string& s);

struct DetectorOptions {
  AssemblyParams assembly;
  OracleOptions oracle;
  NeighborhoodRule neighborhood = NeighborhoodRule::kReportedGeometry;
  UnknownPolicy unknown = UnknownPolicy::kTreatAsInfeasible;
  EcdiSchedule schedule = EcdiSchedule::kNeighborhoodFirst;
  // A check only counts if the assessed UAV shares a measurement with the rest
  // of the sub-network; an unconstrained UAV is trivially "feasible".
  bool require_connectivity = true;
  bool check_trusted_base = true;
  std::function<void(const SuspectSets&)> observer;  // called after every move
};

enum class Assessment { kTrustedBase, kNeighborhood, kIndividual };
std::string to_string(Assessment kind);

struct TraceEntry {
  int pass = 0;
  Assessment kind = Assessment::kNeighborhood;
  int assessed = -1;  // -1 for the trusted-base check
  int subnetwork_size = 0;
  std::optional<OracleStatus> status;  // empty: not verifiable, no oracle call
  bool cached = false;
  IdSet exonerated;
};

struct DetectionResult {
  std::string algorithm;
  SuspectSets initial;
  IdSet predicted_malicious;
  int passes = 0;
  int oracle_calls = 0;
  bool trusted_base_infeasible = false;
  bool oracle_breakdown = false;  // some check came back Unknown
  std::vector<TraceEntry> trace;
};

DetectionResult cdi(const SuspectSets& init, const AttackedScenario& scenario,
                    const DetectorOptions& options = {});
DetectionResult ecdi(const SuspectSets& init, const AttackedScenario& scenario,
                     const DetectorOptions& options = {});

IdSet detector_neighborhood(const AttackedScenario& scenario, int k, NeighborhoodRule rule);

// Baselines that are handed the true malicious count m.
IdSet nlos_baseline(const ReportedDistanceMatrix& e_r, const MeasurementSet& e_n, int m,
                    std::uint64_t seed, double tolerance_sq);
IdSet random_baseline(const IdSet& suspected, int m, std::uint64_t seed);

}  // namespace sdpguard
