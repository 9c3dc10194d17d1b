#include "sdpguard/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sdpguard/rng.hpp"

namespace sdpguard {

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kCdi: return "cdi";
    case Algorithm::kEcdi: return "ecdi";
    case Algorithm::kNlos: return "nlos";
    case Algorithm::kRandom: return "random";
  }
  return "cdi";
}

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::kMaliciousCount: return "malicious_count";
    case SweepParam::kNetworkSize: return "n_uavs";
    case SweepParam::kDistanceNoise: return "dist_var";
    case SweepParam::kCommRange: return "comm_range";
  }
  return "malicious_count";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "cdi") return Algorithm::kCdi;
  if (s == "ecdi") return Algorithm::kEcdi;
  if (s == "nlos") return Algorithm::kNlos;
  if (s == "random") return Algorithm::kRandom;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected cdi, ecdi, nlos or random)");
}

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "malicious_count") return SweepParam::kMaliciousCount;
  if (s == "n_uavs") return SweepParam::kNetworkSize;
  if (s == "dist_var") return SweepParam::kDistanceNoise;
  if (s == "comm_range") return SweepParam::kCommRange;
  throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

namespace {

int as_count(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 0.0 || r > 1e7)
    throw std::invalid_argument(std::string(what) + " sweep values must be non-negative integers");
  return static_cast<int>(r);
}

}  // namespace

ExperimentConfig ExperimentConfig::at_point(std::size_t point) const {
  if (point >= sweep_values.size()) throw std::out_of_range("sweep point out of range");
  ExperimentConfig c = *this;
  const double v = sweep_values[point];
  switch (sweep_param) {
    case SweepParam::kMaliciousCount: c.malicious_count = as_count(v, "malicious_count"); break;
    case SweepParam::kNetworkSize: c.n_uavs = as_count(v, "n_uavs"); break;
    case SweepParam::kDistanceNoise: c.noise.dist_var = v; break;
    case SweepParam::kCommRange: c.comm_range = v; break;
  }
  c.attack_settings.fake_offset_min = fake_offset_min.value_or(c.comm_range);
  c.attack_settings.dist_var = c.noise.dist_var;
  if (unscaled_epsilon) c.assembly.epsilon_multiplier = 1.0;
  return c;
}

void ExperimentConfig::validate() const {
  if (sweep_values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (trials_per_point < 1) throw std::invalid_argument("trials_per_point must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (fake_offset_min && !(*fake_offset_min >= 0.0)) throw std::invalid_argument("fake_offset_min must be >= 0");
  oracle.validate();
  for (std::size_t p = 0; p < sweep_values.size(); ++p) {
    const ExperimentConfig c = at_point(p);
    if (c.n_uavs < 1) throw std::invalid_argument("n_uavs must be >= 1");
    if (c.malicious_count < 0 || c.malicious_count > c.n_uavs)
      throw std::invalid_argument("malicious_count must lie in [0, n_uavs]");
    if (!(c.comm_range > 0.0) || !std::isfinite(c.comm_range)) throw std::invalid_argument("comm_range must be positive");
    if (!(c.cube_half_width > 0.0)) throw std::invalid_argument("cube_half_width must be positive");
    c.noise.validate();
    c.attack_settings.validate();
    c.assembly.validate();
    const bool colludes = c.attack == AttackKind::kCollusion || c.attack == AttackKind::kMixed;
    if (colludes && c.malicious_count >= c.n_uavs && c.malicious_count > 0)
      throw std::invalid_argument("collusion needs a benign target");
    if (collusion_target && (*collusion_target < 0 || *collusion_target >= c.n_uavs))
      throw std::invalid_argument("collusion_target out of range");
  }
}

DetectorOptions ExperimentConfig::detector_options() const {
  DetectorOptions o;
  o.assembly = assembly;
  if (unscaled_epsilon) o.assembly.epsilon_multiplier = 1.0;
  o.oracle = oracle;
  o.neighborhood = neighborhood;
  o.schedule = schedule;
  o.require_connectivity = require_connectivity;
  return o;
}

AttackedScenario build_scenario(const ExperimentConfig& config, std::size_t point, std::size_t trial) {
  const ExperimentConfig c = config.at_point(point);
  const std::uint64_t seed = rng::derive(c.base_seed, static_cast<std::uint64_t>(trial));

  Swarm swarm = generate_swarm(c.n_uavs, c.cube_half_width, c.comm_range, rng::derive(seed, "generate"));
  swarm = apply_position_noise(std::move(swarm), c.noise, rng::derive(seed, "noise"));
  const MeasurementSet meas = measure_distances(swarm, c.noise, rng::derive(seed, "measure"));

  AttackPlan plan;
  plan.kind = c.malicious_count == 0 ? AttackKind::kNone : c.attack;
  plan.malicious_ids = select_malicious(swarm, c.malicious_count, rng::derive(seed, "select"));
  plan.settings = c.attack_settings;
  plan.seed = rng::derive(seed, "attack");
  if (c.collusion_target && !plan.malicious_ids.count(*c.collusion_target)) plan.target = c.collusion_target;
  return execute(swarm, meas, plan);
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t point, std::size_t trial) {
  using Clock = std::chrono::steady_clock;
  const ExperimentConfig c = config.at_point(point);
  const AttackedScenario scn = build_scenario(config, point, trial);
  const std::uint64_t seed = rng::derive(c.base_seed, static_cast<std::uint64_t>(trial));

  TrialResult res;
  res.point = point;
  res.trial = trial;
  res.swept_value = c.sweep_values[point];
  res.truth = scn.plan.malicious_ids;

  const auto t_init = Clock::now();
  const ReportedDistanceMatrix e_r = build_reported_matrix(scn);
  const SuspectSets init = initial_suspects(e_r, scn.measurements, c.comm_range, c.assembly.tolerance_sq);
  const double init_ms = std::chrono::duration<double, std::milli>(Clock::now() - t_init).count();
  res.r_m = malicious_ratio(init);

  const DetectorOptions opts = c.detector_options();
  const int m = static_cast<int>(res.truth.size());
  for (Algorithm alg : c.algorithms) {
    AlgorithmOutcome o;
    o.algorithm = alg;
    const auto t0 = Clock::now();
    switch (alg) {
      case Algorithm::kCdi:
      case Algorithm::kEcdi: {
        const DetectionResult r = alg == Algorithm::kCdi ? cdi(init, scn, opts) : ecdi(init, scn, opts);
        o.predicted = r.predicted_malicious;
        o.oracle_calls = r.oracle_calls;
        o.flagged = r.trusted_base_infeasible || r.oracle_breakdown;
        break;
      }
      case Algorithm::kNlos:
        o.predicted = nlos_baseline(e_r, scn.measurements, m, rng::derive(seed, "nlos"),
                                    measurement_tolerance(c.comm_range, c.assembly.tolerance_sq));
        break;
      case Algorithm::kRandom:
        o.predicted = random_baseline(init.suspected, m, rng::derive(seed, "random"));
        break;
    }
    if (c.record_runtime)
      o.runtime_ms = init_ms + std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    o.metrics = precision_recall_f1(o.predicted, res.truth);
    res.outcomes.push_back(std::move(o));
  }
  return res;
}

std::vector<TrialResult> run_point(const ExperimentConfig& config, std::size_t point) {
  const std::size_t n = static_cast<std::size_t>(config.trials_per_point);
  std::vector<TrialResult> out(n);
  std::size_t workers = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);

  // results land in their trial slot, so the reduction order never depends
  // on scheduling
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < n; t = next++) {
      try {
        out[t] = run_trial(config, point, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double sd() const {
    if (n < 2) return 0.0;
    const double var = (sum_sq - sum * sum / n) / (n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

std::vector<MetricsRow> aggregate(const ExperimentConfig& config, std::size_t point,
                                  const std::vector<TrialResult>& trials) {
  Moments rm;
  for (const auto& t : trials) rm.add(t.r_m);

  auto base_row = [&] {
    MetricsRow row;
    row.param = config.sweep_param;
    row.value = config.sweep_values.at(point);
    row.trials = static_cast<int>(trials.size());
    row.r_m = rm.mean();
    row.r_m_sd = rm.sd();
    return row;
  };

  std::vector<MetricsRow> rows;
  if (config.algorithms.empty()) {
    MetricsRow row = base_row();
    row.algorithm = "none";
    rows.push_back(row);
    return rows;
  }
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    Moments p, r, f, calls, ms;
    int flagged = 0;
    for (const auto& t : trials) {
      const AlgorithmOutcome& o = t.outcomes.at(a);
      p.add(o.metrics.precision);
      r.add(o.metrics.recall);
      f.add(o.metrics.f1);
      calls.add(o.oracle_calls);
      ms.add(o.runtime_ms);
      flagged += o.flagged ? 1 : 0;
    }
    MetricsRow row = base_row();
    row.algorithm = to_string(config.algorithms[a]);
    row.precision = p.mean();
    row.recall = r.mean();
    row.f1 = harmonic_f1(row.precision, row.recall);
    row.oracle_calls = calls.mean();
    row.runtime_ms = ms.mean();
    row.precision_sd = p.sd();
    row.recall_sd = r.sd();
    row.trial_f1_mean = f.mean();
    row.trial_f1_sd = f.sd();
    row.flagged = flagged;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MetricsRow> run_sweep(const ExperimentConfig& config, std::vector<std::vector<TrialResult>>* raw) {
  config.validate();
  std::vector<MetricsRow> rows;
  if (raw) raw->clear();
  for (std::size_t p = 0; p < config.sweep_values.size(); ++p) {
    std::vector<TrialResult> trials = run_point(config, p);
    for (auto& row : aggregate(config, p, trials)) rows.push_back(row);
    if (raw) raw->push_back(std::move(trials));
  }
  return rows;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "# precision=1 when nothing is predicted; recall=1 when nothing is malicious; "
        "f1 is the harmonic mean of the row's precision and recall\n";
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.param) << ',' << fmt("%.10g", r.value) << ',' << r.algorithm << ',';
    if (r.algorithm == "none")
      os << ",,";
    else
      os << fmt("%.6f", r.precision) << ',' << fmt("%.6f", r.recall) << ',' << fmt("%.6f", r.f1);
    os << ',' << fmt("%.6f", r.r_m) << ',' << r.trials << ',' << fmt("%.3f", r.oracle_calls) << ','
       << fmt("%.3f", r.runtime_ms) << '\n';
  }
}

void write_gnuplot(std::ostream& os, const std::vector<MetricsRow>& rows) {
  std::vector<std::string> algs;
  for (const auto& r : rows)
    if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
  bool first = true;
  for (const auto& alg : algs) {
    if (!first) os << "\n\n";
    first = false;
    os << "# algorithm " << alg << "\n";
    os << "# value precision precision_sd recall recall_sd f1 trial_f1_mean trial_f1_sd r_m r_m_sd "
          "oracle_calls flagged\n";
    for (const auto& r : rows) {
      if (r.algorithm != alg) continue;
      os << fmt("%.10g", r.value) << ' ' << fmt("%.6f", r.precision) << ' ' << fmt("%.6f", r.precision_sd)
         << ' ' << fmt("%.6f", r.recall) << ' ' << fmt("%.6f", r.recall_sd) << ' ' << fmt("%.6f", r.f1) << ' '
         << fmt("%.6f", r.trial_f1_mean) << ' ' << fmt("%.6f", r.trial_f1_sd) << ' ' << fmt("%.6f", r.r_m)
         << ' ' << fmt("%.6f", r.r_m_sd) << ' ' << fmt("%.3f", r.oracle_calls) << ' ' << r.flagged << '\n';
    }
  }
}

}  // namespace sdpguard
