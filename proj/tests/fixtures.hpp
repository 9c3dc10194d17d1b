#pragma once

#include "sdpguard/experiment.hpp"
#include "sdpguard/rng.hpp"

namespace sdpguard::ref {

// One seeded scenario built the way the sweep harness builds a trial.
inline AttackedScenario make_scenario(int n, int m, AttackKind kind, std::uint64_t seed, double d = 0.3,
                                      NoiseParams noise = {}) {
  ExperimentConfig cfg;
  cfg.n_uavs = n;
  cfg.malicious_count = m;
  cfg.attack = kind;
  cfg.comm_range = d;
  cfg.noise = noise;
  cfg.base_seed = seed;
  cfg.sweep_values = {static_cast<double>(m)};
  return build_scenario(cfg, 0, 0);
}

inline SuspectSets init_of(const AttackedScenario& scn) {
  return initial_suspects(build_reported_matrix(scn), scn.measurements, scn.swarm.comm_range);
}

inline IdSet all_ids(int n) {
  IdSet s;
  for (int i = 0; i < n; ++i) s.insert(i);
  return s;
}

// Hand-built swarm with reported == true positions and exact ranges.
inline AttackedScenario exact_scenario(const std::vector<Position3>& pos, double d) {
  AttackedScenario scn;
  scn.swarm.comm_range = d;
  for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
    Uav u;
    u.id = i;
    u.true_pos = u.reported_pos = pos[i];
    scn.swarm.uavs.push_back(u);
  }
  scn.measurements = measure_distances(scn.swarm, NoiseParams{0.0, 0.0}, 0);
  return scn;
}

}  // namespace sdpguard::ref
