#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdpguard/detectors.hpp"
#include "sdpguard/metrics.hpp"

namespace sdpguard {

enum class Algorithm { kCdi, kEcdi, kNlos, kRandom };
enum class SweepParam { kMaliciousCount, kNetworkSize, kDistanceNoise, kCommRange };

std::string to_string(Algorithm algorithm);
std::string to_string(SweepParam param);
Algorithm algorithm_from_string(const std::string& s);
SweepParam sweep_param_from_string(const std::string& s);

struct ExperimentConfig {
  int n_uavs = 30;
  int malicious_count = 4;
  double comm_range = 0.3;
  double cube_half_width = 0.5;
  NoiseParams noise;
  AttackKind attack = AttackKind::kDistributed;
  std::optional<int> collusion_target;  // empty: best-connected benign UAV per trial
  std::optional<double> fake_offset_min;  // empty: comm_range
  AttackSettings attack_settings;  // fake_offset_min and dist_var are filled per point
  AssemblyParams assembly;
  bool unscaled_epsilon = false;  // forces the ε multiplier to 1
  OracleOptions oracle;
  NeighborhoodRule neighborhood = NeighborhoodRule::kReportedGeometry;
  EcdiSchedule schedule = EcdiSchedule::kNeighborhoodFirst;
  bool require_connectivity = true;
  std::vector<Algorithm> algorithms{Algorithm::kCdi, Algorithm::kEcdi, Algorithm::kNlos, Algorithm::kRandom};

  SweepParam sweep_param = SweepParam::kMaliciousCount;
  std::vector<double> sweep_values{4.0};
  int trials_per_point = 20;
  std::uint64_t base_seed = 1;
  bool record_runtime = false;  // off keeps the CSV byte-reproducible
  int threads = 0;              // 0: hardware concurrency
  std::string output_path;

  void validate() const;
  // The config with the swept parameter set to sweep_values[point].
  ExperimentConfig at_point(std::size_t point) const;
  DetectorOptions detector_options() const;
};

struct AlgorithmOutcome {
  Algorithm algorithm = Algorithm::kCdi;
  IdSet predicted;
  Prf metrics;
  int oracle_calls = 0;
  double runtime_ms = 0.0;
  bool flagged = false;  // trusted base infeasible or oracle breakdown
};

struct TrialResult {
  std::size_t point = 0;
  std::size_t trial = 0;
  double swept_value = 0.0;
  IdSet truth;
  double r_m = 0.0;
  std::vector<AlgorithmOutcome> outcomes;  // in config.algorithms order
};

struct MetricsRow {
  SweepParam param = SweepParam::kMaliciousCount;
  double value = 0.0;
  std::string algorithm;  // "none" when no algorithm was requested
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;  // harmonic mean of this row's precision and recall
  double r_m = 0.0;
  int trials = 0;
  double oracle_calls = 0.0;
  double runtime_ms = 0.0;
  double precision_sd = 0.0;
  double recall_sd = 0.0;
  double trial_f1_mean = 0.0;
  double trial_f1_sd = 0.0;
  double r_m_sd = 0.0;
  int flagged = 0;
};

// Scenario of one trial; trial seeds depend on (base_seed, trial) only, so all
// sweep points of a trial share their random draws.
AttackedScenario build_scenario(const ExperimentConfig& config, std::size_t point, std::size_t trial);

TrialResult run_trial(const ExperimentConfig& config, std::size_t point, std::size_t trial);

std::vector<TrialResult> run_point(const ExperimentConfig& config, std::size_t point);

std::vector<MetricsRow> aggregate(const ExperimentConfig& config, std::size_t point,
                                  const std::vector<TrialResult>& trials);

std::vector<MetricsRow> run_sweep(const ExperimentConfig& config,
                                  std::vector<std::vector<TrialResult>>* raw = nullptr);

inline constexpr const char* kCsvHeader =
    "sweep_param,value,algorithm,precision,recall,f1,r_m,trials,oracle_calls,runtime_ms";

void write_csv(std::ostream& os, const std::vector<MetricsRow>& rows);
// gnuplot layout: one indexed block per algorithm, mean and sd columns.
void write_gnuplot(std::ostream& os, const std::vector<MetricsRow>& rows);

}  // namespace sdpguard
