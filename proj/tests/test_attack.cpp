#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sdpguard/attack.hpp"

using namespace sdpguard;

namespace {

struct Base {
  Swarm swarm;
  MeasurementSet meas;
};

Base base(int n, std::uint64_t seed, NoiseParams noise = {}) {
  Swarm s = apply_position_noise(generate_swarm(n, 0.5, 0.3, seed), noise, seed + 1);
  MeasurementSet m = measure_distances(s, noise, seed + 2);
  return {s, m};
}

}  // namespace

TEST(Attack, SelectMaliciousIsNestedAndDeterministic) {
  const Base b = base(30, 1);
  IdSet prev;
  for (int m = 0; m <= 30; ++m) {
    const IdSet s = select_malicious(b.swarm, m, 42);
    EXPECT_EQ(static_cast<int>(s.size()), m);
    for (int id : prev) EXPECT_TRUE(s.count(id));
    prev = s;
  }
  EXPECT_EQ(select_malicious(b.swarm, 5, 42), select_malicious(b.swarm, 5, 42));
  EXPECT_THROW(select_malicious(b.swarm, 31, 42), std::invalid_argument);
  EXPECT_THROW(select_malicious(b.swarm, -1, 42), std::invalid_argument);
}

TEST(Attack, DistributedFakesAreFarAndRangesStayPhysical) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Base b = base(30, seed);
    const IdSet mal = select_malicious(b.swarm, 6, seed);
    AttackSettings st;
    const AttackedScenario scn = apply_distributed(b.swarm, b.meas, mal, st, seed);
    EXPECT_EQ(scn.plan.malicious_ids, mal);
    EXPECT_EQ(scn.measurements.entries(), b.meas.entries());
    for (const auto& u : scn.swarm.uavs) {
      EXPECT_EQ(u.malicious, mal.count(u.id) == 1);
      EXPECT_EQ(u.true_pos, b.swarm.uavs[u.id].true_pos);
      if (u.malicious) {
        EXPECT_GE((u.reported_pos - u.true_pos).norm(), 0.3);
        EXPECT_LE(u.reported_pos.cwiseAbs().maxCoeff(), 0.5);
      } else {
        EXPECT_EQ(u.reported_pos, b.swarm.uavs[u.id].reported_pos);
      }
    }
  }
}

TEST(Attack, UnreachableOffsetFallsBackToFarCorner) {
  const Base b = base(5, 3);
  AttackSettings st;
  st.fake_offset_min = 10.0;  // impossible inside the unit cube
  st.max_rejections = 50;
  const AttackedScenario scn = apply_distributed(b.swarm, b.meas, {2}, st, 1);
  const Uav& u = scn.swarm.uavs[2];
  EXPECT_DOUBLE_EQ(u.reported_pos.cwiseAbs().minCoeff(), 0.5);
  for (int c = 0; c < 3; ++c) EXPECT_LE(u.reported_pos[c] * u.true_pos[c], 0.0);
}

TEST(Attack, SelfConsistentClaimsMatchFakeGeometry) {
  const Base b = base(30, 4, NoiseParams{1e-6, 0.0});
  AttackSettings st;
  st.claims = ClaimModel::kSelfConsistent;
  st.dist_var = 0.0;
  const IdSet mal = select_malicious(b.swarm, 4, 9);
  const AttackedScenario scn = apply_distributed(b.swarm, b.meas, mal, st, 9);
  for (int m : mal) {
    for (int j = 0; j < 30; ++j) {
      if (j == m) continue;
      const double e = (scn.swarm.uavs[m].reported_pos - scn.swarm.uavs[j].reported_pos).norm();
      ASSERT_EQ(scn.measurements.contains(m, j), e <= 0.3);
      if (e <= 0.3) EXPECT_EQ(scn.measurements.at(m, j), e);
    }
  }
  // honest rows untouched
  for (const auto& [p, r] : b.meas.entries())
    if (!mal.count(p.from)) EXPECT_EQ(scn.measurements.at(p.from, p.to), r);
}

TEST(Attack, DefaultTargetIsBestConnectedBenign) {
  const Base b = base(30, 5);
  const IdSet mal = select_malicious(b.swarm, 4, 5);
  const int t = default_collusion_target(b.swarm, b.meas, mal);
  EXPECT_FALSE(mal.count(t));
  auto honest_degree = [&](int i) {
    IdSet nb = neighbor_set(b.meas, i);
    std::erase_if(nb, [&](int j) { return mal.count(j) != 0; });
    return nb.size();
  };
  for (int i = 0; i < 30; ++i) {
    if (mal.count(i)) continue;
    EXPECT_LE(honest_degree(i), honest_degree(t));
    if (honest_degree(i) == honest_degree(t)) EXPECT_GE(i, t);
  }
}

TEST(Attack, CollusionFakesSurroundTargetAndFrameIt) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Base b = base(30, seed);
    const IdSet mal = select_malicious(b.swarm, 4, seed);
    const int target = default_collusion_target(b.swarm, b.meas, mal);
    AttackSettings st;
    const AttackedScenario scn = apply_collusion(b.swarm, b.meas, mal, target, st, seed);
    const Position3 xt = scn.swarm.uavs[target].reported_pos;
    EXPECT_EQ(xt, b.swarm.uavs[target].reported_pos);
    for (int m : mal) {
      const Uav& u = scn.swarm.uavs[m];
      EXPECT_LT((u.reported_pos - xt).norm(), 0.3 * (1.0 - st.collusion_margin) + 1e-12);
      EXPECT_GE((u.reported_pos - u.true_pos).norm(), 0.3);
      // the framing claim is in range but contradicts the target's report
      ASSERT_TRUE(scn.measurements.contains(m, target));
      const double r = scn.measurements.at(m, target);
      const double e2 = (u.reported_pos - xt).squaredNorm();
      EXPECT_LT(r, 0.3);
      EXPECT_GE(std::abs(r * r - e2), 0.0225);
    }
  }
}

TEST(Attack, SelfConsistentCollusionClaimEqualsFakeDistance) {
  const Base b = base(30, 6, NoiseParams{1e-6, 0.0});
  AttackSettings st;
  st.claims = ClaimModel::kSelfConsistent;
  st.dist_var = 0.0;
  const IdSet mal = select_malicious(b.swarm, 1, 6);
  const int m = *mal.begin();
  // pick a target the colluder cannot physically reach
  int target = -1;
  for (int i = 0; i < 30 && target < 0; ++i)
    if (i != m && (b.swarm.uavs[i].true_pos - b.swarm.uavs[m].true_pos).norm() > 0.3) target = i;
  ASSERT_GE(target, 0);
  const AttackedScenario scn = apply_collusion(b.swarm, b.meas, mal, target, st, 6);
  const double e = (scn.swarm.uavs[m].reported_pos - scn.swarm.uavs[target].reported_pos).norm();
  EXPECT_LT(e, 0.3);
  ASSERT_TRUE(scn.measurements.contains(m, target));
  EXPECT_EQ(scn.measurements.at(m, target), e);
  EXPECT_FALSE(scn.measurements.contains(target, m));
}

TEST(Attack, CollusionTargetMustBeBenign) {
  const Base b = base(10, 7);
  EXPECT_THROW(apply_collusion(b.swarm, b.meas, {1, 2}, 2, AttackSettings{}, 1), std::invalid_argument);
  EXPECT_THROW(apply_collusion(b.swarm, b.meas, {1, 2}, 11, AttackSettings{}, 1), std::out_of_range);
}

TEST(Attack, MixedIsUnionOfDisjointParts) {
  const Base b = base(30, 8);
  const IdSet mal = select_malicious(b.swarm, 6, 8);
  const auto [dist, coll] = split_mixed(mal);
  EXPECT_EQ(dist.size(), 3u);
  EXPECT_EQ(coll.size(), 3u);
  const AttackedScenario scn = apply_mixed(b.swarm, b.meas, dist, coll, std::nullopt, AttackSettings{}, 8);
  EXPECT_EQ(scn.plan.malicious_ids, mal);
  EXPECT_EQ(scn.swarm.malicious_ids(), mal);
  ASSERT_TRUE(scn.plan.target.has_value());
  EXPECT_FALSE(mal.count(*scn.plan.target));
  EXPECT_THROW(apply_mixed(b.swarm, b.meas, {1, 2}, {2, 3}, std::nullopt, AttackSettings{}, 1),
               std::invalid_argument);
}

TEST(Attack, SplitMixedGivesLargerHalfToDistributed) {
  const auto [d5, c5] = split_mixed({1, 4, 7, 9, 12});
  EXPECT_EQ(d5, IdSet({1, 4, 7}));
  EXPECT_EQ(c5, IdSet({9, 12}));
  const auto [d0, c0] = split_mixed({});
  EXPECT_TRUE(d0.empty() && c0.empty());
}

TEST(Attack, NoneLeavesScenarioUntouched) {
  const Base b = base(10, 9);
  AttackPlan p;
  p.kind = AttackKind::kNone;
  const AttackedScenario scn = execute(b.swarm, b.meas, p);
  EXPECT_TRUE(scn.swarm.malicious_ids().empty());
  EXPECT_EQ(scn.measurements.entries(), b.meas.entries());
}

TEST(Attack, AttackDoesNotPerturbBenignGeometry) {
  // same trial seed with and without attackers: benign reports agree
  const AttackedScenario clean = ref::make_scenario(30, 0, AttackKind::kDistributed, 3);
  const AttackedScenario hit = ref::make_scenario(30, 5, AttackKind::kDistributed, 3);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(clean.swarm.uavs[i].true_pos, hit.swarm.uavs[i].true_pos);
    if (!hit.swarm.uavs[i].malicious) EXPECT_EQ(clean.swarm.uavs[i].reported_pos, hit.swarm.uavs[i].reported_pos);
  }
}

TEST(Attack, SettingsValidate) {
  AttackSettings st;
  st.collusion_margin = 1.0;
  EXPECT_THROW(st.validate(), std::invalid_argument);
  st = AttackSettings{};
  st.fake_offset_min = -1.0;
  EXPECT_THROW(st.validate(), std::invalid_argument);
  EXPECT_THROW(attack_kind_from_string("sybil"), std::invalid_argument);
}
