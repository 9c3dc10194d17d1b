#include "sdpguard/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sdpguard/rng.hpp"

namespace sdpguard {

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kDistributed: return "distributed";
    case AttackKind::kCollusion: return "collusion";
    case AttackKind::kMixed: return "mixed";
  }
  return "none";
}

std::string to_string(ClaimModel model) {
  return model == ClaimModel::kPhysicalRanging ? "physical" : "self_consistent";
}

AttackKind attack_kind_from_string(const std::string& s) {
  if (s == "none") return AttackKind::kNone;
  if (s == "distributed") return AttackKind::kDistributed;
  if (s == "collusion") return AttackKind::kCollusion;
  if (s == "mixed") return AttackKind::kMixed;
  throw std::invalid_argument("unknown attack kind '" + s + "'");
}

ClaimModel claim_model_from_string(const std::string& s) {
  if (s == "physical") return ClaimModel::kPhysicalRanging;
  if (s == "self_consistent") return ClaimModel::kSelfConsistent;
  throw std::invalid_argument("unknown claim model '" + s + "'");
}

void AttackSettings::validate() const {
  if (!(fake_offset_min >= 0.0)) throw std::invalid_argument("fake_offset_min must be >= 0");
  if (!(collusion_margin > 0.0 && collusion_margin < 1.0))
    throw std::invalid_argument("collusion_margin must lie in (0, 1)");
  if (!(framing_margin > 0.0 && framing_margin < 1.0))
    throw std::invalid_argument("framing_margin must lie in (0, 1)");
  if (!(dist_var >= 0.0)) throw std::invalid_argument("dist_var must be >= 0");
  if (max_rejections < 1) throw std::invalid_argument("max_rejections must be >= 1");
}

void AttackPlan::validate(int n) const {
  settings.validate();
  auto check = [n](const IdSet& ids) {
    for (int id : ids)
      if (id < 0 || id >= n) throw std::out_of_range("malicious id " + std::to_string(id) + " out of range");
  };
  check(malicious_ids);
  check(distributed_ids);
  check(collusion_ids);
  if (target) {
    if (*target < 0 || *target >= n) throw std::out_of_range("collusion target out of range");
    if (malicious_ids.count(*target)) throw std::invalid_argument("collusion target must be benign");
  }
  for (int id : distributed_ids)
    if (collusion_ids.count(id)) throw std::invalid_argument("distributed and collusion sets overlap");
}

IdSet select_malicious(const Swarm& swarm, int m, std::uint64_t seed) {
  const int n = swarm.size();
  if (m < 0 || m > n) throw std::invalid_argument("malicious count must lie in [0, N]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto gen = rng::engine(seed, "attack.select");
  std::shuffle(order.begin(), order.end(), gen);
  return IdSet(order.begin(), order.begin() + m);
}

int default_collusion_target(const Swarm& swarm, const MeasurementSet& measurements,
                             const IdSet& malicious) {
  int best = -1;
  std::size_t best_degree = 0;
  for (int i = 0; i < swarm.size(); ++i) {
    if (malicious.count(i)) continue;
    IdSet nb = neighbor_set(measurements, i);
    std::erase_if(nb, [&](int j) { return malicious.count(j) != 0; });
    if (best < 0 || nb.size() > best_degree) {
      best = i;
      best_degree = nb.size();
    }
  }
  if (best < 0) throw std::invalid_argument("collusion needs at least one benign UAV");
  return best;
}

std::pair<IdSet, IdSet> split_mixed(const IdSet& malicious) {
  const std::size_t n_dist = (malicious.size() + 1) / 2;
  IdSet dist, coll;
  std::size_t k = 0;
  for (int id : malicious) (k++ < n_dist ? dist : coll).insert(id);
  return {dist, coll};
}

namespace {

bool in_cube(const Position3& p, double half) { return p.cwiseAbs().maxCoeff() <= half; }

Position3 sample_far_in_cube(const Position3& origin, double half, double offset, int max_rejections,
                             rng::Engine& gen) {
  std::uniform_real_distribution<double> coord(-half, half);
  for (int attempt = 0; attempt < max_rejections; ++attempt) {
    Position3 p(coord(gen), coord(gen), coord(gen));
    if ((p - origin).norm() >= offset) return p;
  }
  Position3 corner;
  for (int c = 0; c < 3; ++c) corner[c] = origin[c] > 0.0 ? -half : half;
  return corner;
}

Position3 sample_near_target(const Position3& center, double radius, const Position3& origin,
                             double offset, double half, int max_rejections, rng::Engine& gen) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::optional<Position3> best;
  double best_offset = -1.0;
  for (int attempt = 0; attempt < max_rejections; ++attempt) {
    Position3 dir(n01(gen), n01(gen), n01(gen));
    const double norm = dir.norm();
    if (norm == 0.0) continue;
    const Position3 p = center + dir * (radius * std::cbrt(u01(gen)) / norm);
    if (!in_cube(p, half)) continue;
    const double off = (p - origin).norm();
    if (off >= offset) return p;
    if (off > best_offset) {
      best_offset = off;
      best = p;
    }
  }
  if (best) return *best;
  return center.cwiseMax(-half).cwiseMin(half);
}

double noisy(double r, double sigma, std::normal_distribution<double>& n01, rng::Engine& gen) {
  if (sigma > 0.0) r += sigma * n01(gen);
  return std::max(r, kMinMeasuredDistance);
}

void rewrite_consistent(AttackedScenario& scn, const IdSet& ids, const AttackSettings& settings,
                        rng::Engine& gen) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sigma = std::sqrt(settings.dist_var);
  const int n = scn.swarm.size();
  for (int m : ids) {
    for (int j = 0; j < n; ++j) {
      if (j == m) continue;
      scn.measurements.erase(m, j);
      const double e = (scn.swarm.uavs[m].reported_pos - scn.swarm.uavs[j].reported_pos).norm();
      if (e <= scn.swarm.comm_range) scn.measurements.set(m, j, noisy(e, sigma, n01, gen));
    }
  }
}

// One claim per colluder that is still in range but disagrees with the
// target's report by more than the detector tolerance.
void inject_framing(AttackedScenario& scn, const IdSet& colluders, int target,
                    const AttackSettings& settings, rng::Engine& gen) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sigma = std::sqrt(settings.dist_var);
  const double d = scn.swarm.comm_range;
  const double h = 0.25 * d * d;
  const double reach = d * (1.0 - settings.collusion_margin);
  for (int m : colluders) {
    const double e2 =
        (scn.swarm.uavs[m].reported_pos - scn.swarm.uavs[target].reported_pos).squaredNorm();
    double r2 = e2 + (1.0 + settings.framing_margin) * h;
    if (r2 > reach * reach) r2 = e2 - (1.0 + settings.framing_margin) * h;
    r2 = std::max(r2, kMinMeasuredDistance * kMinMeasuredDistance);
    scn.measurements.set(m, target, noisy(std::sqrt(r2), sigma, n01, gen));
  }
}

AttackedScenario start(const Swarm& swarm, const MeasurementSet& measurements) {
  swarm.validate();
  if (measurements.size() != swarm.size())
    throw std::invalid_argument("measurement set does not match swarm size");
  return AttackedScenario{swarm, measurements, AttackPlan{}};
}

void check_ids(const Swarm& swarm, const IdSet& ids) {
  for (int id : ids)
    if (id < 0 || id >= swarm.size()) throw std::out_of_range("malicious id out of range");
}

void distribute_into(AttackedScenario& scn, const IdSet& ids, const AttackSettings& settings,
                     std::uint64_t seed) {
  auto gen = rng::engine(seed, "attack.distributed");
  for (int m : ids) {
    Uav& u = scn.swarm.uavs[m];
    u.malicious = true;
    u.reported_pos = sample_far_in_cube(u.true_pos, scn.swarm.cube_half_width,
                                        settings.fake_offset_min, settings.max_rejections, gen);
  }
  if (settings.claims == ClaimModel::kSelfConsistent) rewrite_consistent(scn, ids, settings, gen);
}

void collude_into(AttackedScenario& scn, const IdSet& ids, int target,
                  const AttackSettings& settings, std::uint64_t seed) {
  if (target < 0 || target >= scn.swarm.size()) throw std::out_of_range("collusion target out of range");
  if (ids.count(target) || scn.swarm.uavs[target].malicious)
    throw std::invalid_argument("collusion target must be benign");
  auto gen = rng::engine(seed, "attack.collusion");
  const Position3 center = scn.swarm.uavs[target].reported_pos;
  const double radius = scn.swarm.comm_range * (1.0 - settings.collusion_margin);
  for (int m : ids) {
    Uav& u = scn.swarm.uavs[m];
    u.malicious = true;
    u.reported_pos = sample_near_target(center, radius, u.true_pos, settings.fake_offset_min,
                                        scn.swarm.cube_half_width, settings.max_rejections, gen);
  }
  if (settings.claims == ClaimModel::kSelfConsistent)
    rewrite_consistent(scn, ids, settings, gen);
  else
    inject_framing(scn, ids, target, settings, gen);
}

}  // namespace

AttackedScenario apply_distributed(const Swarm& swarm, const MeasurementSet& measurements,
                                   const IdSet& malicious, const AttackSettings& settings,
                                   std::uint64_t seed) {
  settings.validate();
  check_ids(swarm, malicious);
  AttackedScenario scn = start(swarm, measurements);
  distribute_into(scn, malicious, settings, seed);
  scn.plan.kind = AttackKind::kDistributed;
  scn.plan.malicious_ids = malicious;
  scn.plan.distributed_ids = malicious;
  scn.plan.settings = settings;
  scn.plan.seed = seed;
  return scn;
}

AttackedScenario apply_collusion(const Swarm& swarm, const MeasurementSet& measurements,
                                 const IdSet& colluders, int target,
                                 const AttackSettings& settings, std::uint64_t seed) {
  settings.validate();
  check_ids(swarm, colluders);
  AttackedScenario scn = start(swarm, measurements);
  collude_into(scn, colluders, target, settings, seed);
  scn.plan.kind = AttackKind::kCollusion;
  scn.plan.malicious_ids = colluders;
  scn.plan.collusion_ids = colluders;
  scn.plan.target = target;
  scn.plan.settings = settings;
  scn.plan.seed = seed;
  return scn;
}

AttackedScenario apply_mixed(const Swarm& swarm, const MeasurementSet& measurements,
                             const IdSet& distributed, const IdSet& colluders,
                             std::optional<int> target, const AttackSettings& settings,
                             std::uint64_t seed) {
  settings.validate();
  check_ids(swarm, distributed);
  check_ids(swarm, colluders);
  for (int id : distributed)
    if (colluders.count(id)) throw std::invalid_argument("distributed and collusion sets overlap");

  IdSet all = distributed;
  all.insert(colluders.begin(), colluders.end());
  AttackedScenario scn = start(swarm, measurements);
  std::optional<int> tgt = target;
  if (!colluders.empty() && !tgt) tgt = default_collusion_target(swarm, measurements, all);
  if (tgt && all.count(*tgt)) throw std::invalid_argument("collusion target must be benign");

  distribute_into(scn, distributed, settings, rng::derive(seed, "mixed.distributed"));
  if (!colluders.empty()) collude_into(scn, colluders, *tgt, settings, rng::derive(seed, "mixed.collusion"));

  scn.plan.kind = AttackKind::kMixed;
  scn.plan.malicious_ids = all;
  scn.plan.distributed_ids = distributed;
  scn.plan.collusion_ids = colluders;
  scn.plan.target = colluders.empty() ? std::nullopt : tgt;
  scn.plan.settings = settings;
  scn.plan.seed = seed;
  return scn;
}

AttackedScenario execute(const Swarm& swarm, const MeasurementSet& measurements, AttackPlan plan) {
  plan.validate(swarm.size());
  switch (plan.kind) {
    case AttackKind::kNone: {
      AttackedScenario scn = start(swarm, measurements);
      plan.malicious_ids.clear();
      scn.plan = plan;
      return scn;
    }
    case AttackKind::kDistributed:
      return apply_distributed(swarm, measurements, plan.malicious_ids, plan.settings, plan.seed);
    case AttackKind::kCollusion: {
      const int target = plan.target ? *plan.target
                                     : default_collusion_target(swarm, measurements, plan.malicious_ids);
      return apply_collusion(swarm, measurements, plan.malicious_ids, target, plan.settings, plan.seed);
    }
    case AttackKind::kMixed: {
      IdSet dist = plan.distributed_ids, coll = plan.collusion_ids;
      if (dist.empty() && coll.empty()) std::tie(dist, coll) = split_mixed(plan.malicious_ids);
      return apply_mixed(swarm, measurements, dist, coll, plan.target, plan.settings, plan.seed);
    }
  }
  throw std::logic_error("unhandled attack kind");
}

}  // namespace sdpguard
