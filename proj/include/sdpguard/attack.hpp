#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdpguard/swarm.hpp"

namespace sdpguard {

enum class AttackKind { kNone, kDistributed, kCollusion, kMixed };

// How malicious UAVs treat their own outgoing range claims.
//   kPhysicalRanging: ranges are physical measurements that cannot be moved
//     with the lie. Distributed attackers leave them alone; every colluder
//     injects one claim against the target that contradicts the target's
//     report.
//   kSelfConsistent: every outgoing claim is rewritten to match the fake
//     position, so the attacker's own row is internally consistent.
enum class ClaimModel { kPhysicalRanging, kSelfConsistent };

std::string to_string(AttackKind kind);
std::string to_string(ClaimModel model);
AttackKind attack_kind_from_string(const std::string& s);
ClaimModel claim_model_from_string(const std::string& s);

struct AttackSettings {
  double fake_offset_min = 0.3;
  ClaimModel claims = ClaimModel::kPhysicalRanging;
  double collusion_margin = 0.05;  // colluder fakes stay within d(1 - margin) of the target
  double framing_margin = 0.2;     // framing claims miss the tolerance by this fraction
  double dist_var = 1e-6;          // noise on fabricated claims
  int max_rejections = 10000;
  void validate() const;
};

struct AttackPlan {
  AttackKind kind = AttackKind::kNone;
  IdSet malicious_ids;
  IdSet distributed_ids;
  IdSet collusion_ids;
  std::optional<int> target;
  AttackSettings settings;
  std::uint64_t seed = 0;
  void validate(int n) const;
};

struct AttackedScenario {
  Swarm swarm;
  MeasurementSet measurements;
  AttackPlan plan;
};

// First m entries of a seeded permutation, so sets are nested across m for a
// fixed seed.
IdSet select_malicious(const Swarm& swarm, int m, std::uint64_t seed);

// Benign UAV with the most honest measurement neighbours (lowest id on ties).
int default_collusion_target(const Swarm& swarm, const MeasurementSet& measurements,
                             const IdSet& malicious);

// Split used for mixed sweeps: the larger half (ascending ids) attacks alone.
std::pair<IdSet, IdSet> split_mixed(const IdSet& malicious);

AttackedScenario apply_distributed(const Swarm& swarm, const MeasurementSet& measurements,
                                   const IdSet& malicious, const AttackSettings& settings,
                                   std::uint64_t seed);

AttackedScenario apply_collusion(const Swarm& swarm, const MeasurementSet& measurements,
                                 const IdSet& colluders, int target,
                                 const AttackSettings& settings, std::uint64_t seed);

AttackedScenario apply_mixed(const Swarm& swarm, const MeasurementSet& measurements,
                             const IdSet& distributed, const IdSet& colluders,
                             std::optional<int> target, const AttackSettings& settings,
                             std::uint64_t seed);

// Dispatches on plan.kind; fills plan.target for collusion if it was empty.
AttackedScenario execute(const Swarm& swarm, const MeasurementSet& measurements, AttackPlan plan);

}  // namespace sdpguard
