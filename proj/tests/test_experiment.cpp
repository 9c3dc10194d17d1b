#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "sdpguard/experiment.hpp"

using namespace sdpguard;

namespace {

ExperimentConfig small_sweep() {
  ExperimentConfig cfg;
  cfg.n_uavs = 20;
  cfg.sweep_param = SweepParam::kMaliciousCount;
  cfg.sweep_values = {1, 3};
  cfg.trials_per_point = 4;
  cfg.base_seed = 11;
  return cfg;
}

std::string csv_of(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_csv(os, run_sweep(cfg));
  return os.str();
}

}  // namespace

TEST(Experiment, CsvHeaderIsExact) {
  std::ostringstream os;
  write_csv(os, {});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line[0], '#');
  std::getline(is, line);
  EXPECT_EQ(line, "sweep_param,value,algorithm,precision,recall,f1,r_m,trials,oracle_calls,runtime_ms");
}

TEST(Experiment, SweepIsDeterministicAndThreadIndependent) {
  ExperimentConfig one = small_sweep();
  one.threads = 1;
  ExperimentConfig many = small_sweep();
  many.threads = 4;
  const std::string a = csv_of(one);
  EXPECT_EQ(a, csv_of(one));
  EXPECT_EQ(a, csv_of(many));
  ExperimentConfig other = small_sweep();
  other.base_seed = 12;
  EXPECT_NE(a, csv_of(other));
}

TEST(Experiment, RowsAreConsistent) {
  const ExperimentConfig cfg = small_sweep();
  std::vector<std::vector<TrialResult>> raw;
  const auto rows = run_sweep(cfg, &raw);
  ASSERT_EQ(rows.size(), cfg.sweep_values.size() * cfg.algorithms.size());
  ASSERT_EQ(raw.size(), cfg.sweep_values.size());
  for (const MetricsRow& r : rows) {
    EXPECT_EQ(r.trials, cfg.trials_per_point);
    EXPECT_DOUBLE_EQ(r.f1, harmonic_f1(r.precision, r.recall));
    EXPECT_EQ(r.runtime_ms, 0.0);
    EXPECT_GE(r.precision, 0.0);
    EXPECT_LE(r.recall, 1.0);
  }
  // recompute one row's means from the raw trials
  const auto& trials = raw[1];
  double p = 0, rec = 0, calls = 0, rm = 0;
  for (const TrialResult& t : trials) {
    const AlgorithmOutcome& o = t.outcomes[1];
    EXPECT_EQ(o.algorithm, Algorithm::kEcdi);
    const Prf check = precision_recall_f1(o.predicted, t.truth);
    EXPECT_EQ(check.precision, o.metrics.precision);
    p += o.metrics.precision;
    rec += o.metrics.recall;
    calls += o.oracle_calls;
    rm += t.r_m;
    EXPECT_EQ(t.truth.size(), 3u);
  }
  const MetricsRow& row = rows[cfg.algorithms.size() + 1];
  EXPECT_EQ(row.algorithm, "ecdi");
  EXPECT_DOUBLE_EQ(row.value, 3.0);
  EXPECT_NEAR(row.precision, p / trials.size(), 1e-12);
  EXPECT_NEAR(row.recall, rec / trials.size(), 1e-12);
  EXPECT_NEAR(row.oracle_calls, calls / trials.size(), 1e-12);
  EXPECT_NEAR(row.r_m, rm / trials.size(), 1e-12);
}

TEST(Experiment, TrialsShareDrawsAcrossSweepPoints) {
  const ExperimentConfig cfg = small_sweep();
  const AttackedScenario a = build_scenario(cfg, 0, 2);
  const AttackedScenario b = build_scenario(cfg, 1, 2);
  for (int i = 0; i < a.swarm.size(); ++i) EXPECT_EQ(a.swarm.uavs[i].true_pos, b.swarm.uavs[i].true_pos);
  // malicious sets are nested: the m = 1 attacker is among the m = 3 ones
  EXPECT_TRUE(b.swarm.malicious_ids().count(*a.swarm.malicious_ids().begin()));
}

TEST(Experiment, BaselinesAreHandedTheTrueCount) {
  ExperimentConfig cfg = small_sweep();
  cfg.algorithms = {Algorithm::kNlos, Algorithm::kRandom};
  for (std::size_t t = 0; t < 4; ++t) {
    const TrialResult r = run_trial(cfg, 1, t);
    const int m0 = static_cast<int>(ref::init_of(build_scenario(cfg, 1, t)).suspected.size());
    EXPECT_EQ(r.outcomes[1].predicted.size(), static_cast<std::size_t>(std::min(3, m0)));
    EXPECT_LE(r.outcomes[0].predicted.size(), 3u);
    EXPECT_EQ(r.outcomes[0].oracle_calls, 0);
  }
}

TEST(Experiment, NoAlgorithmsGivesNoneRow) {
  ExperimentConfig cfg = small_sweep();
  cfg.algorithms.clear();
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].algorithm, "none");
  std::ostringstream os;
  write_csv(os, rows);
  EXPECT_NE(os.str().find("malicious_count,1,none,,,,"), std::string::npos);
}

TEST(Experiment, OtherSweepParameters) {
  ExperimentConfig cfg = small_sweep();
  cfg.algorithms = {Algorithm::kCdi};
  cfg.trials_per_point = 2;
  cfg.sweep_param = SweepParam::kCommRange;
  cfg.sweep_values = {0.25, 0.35};
  EXPECT_EQ(cfg.at_point(1).comm_range, 0.35);
  EXPECT_EQ(build_scenario(cfg, 1, 0).swarm.comm_range, 0.35);
  cfg.sweep_param = SweepParam::kDistanceNoise;
  cfg.sweep_values = {1e-5};
  EXPECT_EQ(cfg.at_point(0).noise.dist_var, 1e-5);
  cfg.sweep_param = SweepParam::kNetworkSize;
  cfg.sweep_values = {12};
  EXPECT_EQ(build_scenario(cfg, 0, 0).swarm.size(), 12);
  std::ostringstream os;
  write_csv(os, run_sweep(cfg));
  EXPECT_NE(os.str().find("\nn_uavs,12,cdi,"), std::string::npos);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig cfg = small_sweep();
  cfg.sweep_values = {25};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_sweep();
  cfg.sweep_values = {1.5};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_sweep();
  cfg.trials_per_point = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_sweep();
  cfg.sweep_values.clear();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(algorithm_from_string("sdp"), std::invalid_argument);
  EXPECT_EQ(algorithm_from_string("ecdi"), Algorithm::kEcdi);
  EXPECT_EQ(sweep_param_from_string("comm_range"), SweepParam::kCommRange);
}

TEST(Experiment, UnscaledEpsilonDropsTheMultiplier) {
  ExperimentConfig cfg = small_sweep();
  EXPECT_DOUBLE_EQ(cfg.at_point(0).assembly.effective_epsilon(), 1e-5);
  cfg.unscaled_epsilon = true;
  EXPECT_DOUBLE_EQ(cfg.at_point(0).assembly.effective_epsilon(), 1e-6);
}
