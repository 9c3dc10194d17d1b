// sdpguard command line: generate / attack / detect / sweep / oracle-check.
// Every subcommand reads and writes the JSON formats in sdpguard/io.hpp;
// sweep writes CSV (plus an optional gnuplot companion).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdpguard/io.hpp"
#include "sdpguard/rng.hpp"

using namespace sdpguard;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return read_json_file(path).get<ExperimentConfig>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect and identify position-spoofing UAVs via semidefinite feasibility checks"};
  app.require_subcommand(1);

  std::string config_path, out_path = "-", in_path, algo, ids_arg, dump_path, problem_path, gnuplot_path;
  std::optional<std::uint64_t> seed;

  // generate
  auto* gen = app.add_subcommand("generate", "sample a swarm and its range measurements");
  std::optional<int> n_uavs;
  std::optional<double> comm_range, cube_half, pos_var, dist_var;
  gen->add_option("--config", config_path, "experiment config JSON (defaults for the options below)");
  gen->add_option("--seed", seed, "RNG seed (default: config base_seed)");
  gen->add_option("--out", out_path, "output path, - for stdout");
  gen->add_option("--n", n_uavs, "number of UAVs");
  gen->add_option("--comm-range", comm_range, "communication range d");
  gen->add_option("--cube-half-width", cube_half, "half width of the deployment cube");
  gen->add_option("--pos-var", pos_var, "variance of reported position noise");
  gen->add_option("--dist-var", dist_var, "variance of range noise");

  // attack
  auto* att = app.add_subcommand("attack", "apply a spoofing attack to a generated swarm");
  std::string kind = "distributed", plan_path, claims;
  int m = 4;
  std::optional<int> target;
  std::optional<double> fake_offset;
  att->add_option("--in", in_path, "output of generate")->required();
  att->add_option("--config", config_path, "experiment config JSON (attack settings)");
  att->add_option("--plan", plan_path, "AttackPlan JSON; overrides --kind/--m/--target");
  att->add_option("--kind", kind, "distributed | collusion | mixed | none");
  att->add_option("--m", m, "number of malicious UAVs");
  att->add_option("--target", target, "collusion target id");
  att->add_option("--claims", claims, "physical | self_consistent");
  att->add_option("--fake-offset", fake_offset, "minimum distance between fake and true position");
  att->add_option("--seed", seed, "RNG seed");
  att->add_option("--out", out_path, "output path, - for stdout");

  // detect
  auto* det = app.add_subcommand("detect", "run a detector on an attacked scenario");
  det->add_option("--in", in_path, "AttackedScenario JSON")->required();
  det->add_option("--algo", algo, "cdi | ecdi | nlos | random")->required();
  det->add_option("--config", config_path, "experiment config JSON (detector and oracle settings)");
  det->add_option("--seed", seed, "seed for the randomized baselines");
  det->add_option("--out", out_path, "output path, - for stdout");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Monte-Carlo sweep, one CSV row per value and algorithm");
  std::optional<int> threads;
  swp->add_option("--config", config_path, "experiment config JSON")->required();
  swp->add_option("--seed", seed, "overrides base_seed");
  swp->add_option("--algo", algo, "comma-separated algorithm list, overrides the config");
  swp->add_option("--out", out_path, "CSV path (default: config output_path, else stdout)");
  swp->add_option("--gnuplot", gnuplot_path, "also write a gnuplot data file");
  swp->add_option("--threads", threads, "worker threads, 0 = all cores");

  // oracle-check
  auto* orc = app.add_subcommand("oracle-check", "run the SDR feasibility oracle on one sub-network");
  std::string method;
  orc->add_option("--problem", problem_path, "FeasibilityProblem JSON");
  orc->add_option("--in", in_path, "AttackedScenario JSON to assemble from");
  orc->add_option("--ids", ids_arg, "comma-separated sub-network ids (default: all)");
  orc->add_option("--config", config_path, "experiment config JSON (ε, δ, tolerances)");
  orc->add_option("--method", method, "node_reduction | lifted_admm");
  orc->add_option("--dump", dump_path, "write the dense problem dump here");
  orc->add_option("--seed", seed, "unused, accepted for uniformity");
  orc->add_option("--out", out_path, "output path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ExperimentConfig cfg = load_config(config_path);
      const ExperimentConfig c = cfg.at_point(0);
      NoiseParams noise = c.noise;
      if (pos_var) noise.pos_var = *pos_var;
      if (dist_var) noise.dist_var = *dist_var;
      const std::uint64_t s = seed.value_or(c.base_seed);
      Swarm swarm = generate_swarm(n_uavs.value_or(c.n_uavs), cube_half.value_or(c.cube_half_width),
                                   comm_range.value_or(c.comm_range), s);
      swarm = apply_position_noise(std::move(swarm), noise, rng::derive(s, "noise"));
      const MeasurementSet meas = measure_distances(swarm, noise, rng::derive(s, "measure"));
      write_json_file(out_path, json{{"swarm", swarm}, {"measurements", meas}, {"noise", {{"pos_var", noise.pos_var}, {"dist_var", noise.dist_var}}}});
      return 0;
    }

    if (att->parsed()) {
      const json in = read_json_file(in_path);
      const Swarm swarm = in.at("swarm").get<Swarm>();
      const MeasurementSet meas = in.at("measurements").get<MeasurementSet>();
      const ExperimentConfig cfg = load_config(config_path).at_point(0);
      const std::uint64_t s = seed.value_or(cfg.base_seed);

      AttackPlan plan;
      if (!plan_path.empty()) {
        plan = read_json_file(plan_path).get<AttackPlan>();
        if (seed) plan.seed = *seed;
      } else {
        plan.kind = attack_kind_from_string(kind);
        plan.settings = cfg.attack_settings;
        plan.settings.fake_offset_min = cfg.fake_offset_min.value_or(swarm.comm_range);
        if (in.contains("noise")) plan.settings.dist_var = in.at("noise").at("dist_var").get<double>();
        if (!claims.empty()) plan.settings.claims = claim_model_from_string(claims);
        if (fake_offset) plan.settings.fake_offset_min = *fake_offset;
        plan.malicious_ids = select_malicious(swarm, m, rng::derive(s, "select"));
        plan.target = target;
        plan.seed = rng::derive(s, "attack");
      }
      write_json_file(out_path, json(execute(swarm, meas, plan)));
      return 0;
    }

    if (det->parsed()) {
      const AttackedScenario scn = read_json_file(in_path).get<AttackedScenario>();
      const ExperimentConfig cfg = load_config(config_path);
      const Algorithm a = algorithm_from_string(algo);
      const ReportedDistanceMatrix e_r = build_reported_matrix(scn);
      const SuspectSets init =
          initial_suspects(e_r, scn.measurements, scn.swarm.comm_range, cfg.assembly.tolerance_sq);
      DetectionResult r;
      if (a == Algorithm::kCdi || a == Algorithm::kEcdi) {
        const DetectorOptions opts = cfg.detector_options();
        r = a == Algorithm::kCdi ? cdi(init, scn, opts) : ecdi(init, scn, opts);
      } else {
        // baselines are told how many attackers there are
        const int mcount = static_cast<int>(scn.plan.malicious_ids.size());
        const std::uint64_t s = seed.value_or(cfg.base_seed);
        r.algorithm = algo;
        r.initial = init;
        r.predicted_malicious =
            a == Algorithm::kNlos
                ? nlos_baseline(e_r, scn.measurements, mcount, rng::derive(s, "nlos"),
                                measurement_tolerance(scn.swarm.comm_range, cfg.assembly.tolerance_sq))
                : random_baseline(init.suspected, mcount, rng::derive(s, "random"));
      }
      json j = r;
      if (!scn.plan.malicious_ids.empty() || scn.plan.kind != AttackKind::kNone) {
        const Prf prf = precision_recall_f1(r.predicted_malicious, scn.plan.malicious_ids);
        j["metrics"] = {{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1},
                        {"r_m", malicious_ratio(init)}};
      }
      write_json_file(out_path, j);
      return 0;
    }

    if (swp->parsed()) {
      ExperimentConfig cfg = load_config(config_path);
      if (seed) cfg.base_seed = *seed;
      if (threads) cfg.threads = *threads;
      if (!algo.empty()) {
        cfg.algorithms.clear();
        for (const auto& a : split_list(algo)) cfg.algorithms.push_back(algorithm_from_string(a));
      }
      if (out_path == "-" && !cfg.output_path.empty()) out_path = cfg.output_path;
      const std::vector<MetricsRow> rows = run_sweep(cfg);
      if (out_path == "-") {
        write_csv(std::cout, rows);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        write_csv(out, rows);
      }
      if (!gnuplot_path.empty()) {
        std::ofstream g(gnuplot_path);
        if (!g) throw std::runtime_error("cannot write '" + gnuplot_path + "'");
        write_gnuplot(g, rows);
      }
      return 0;
    }

    if (orc->parsed()) {
      const ExperimentConfig cfg = load_config(config_path);
      FeasibilityProblem problem;
      if (!problem_path.empty()) {
        problem = read_json_file(problem_path).get<FeasibilityProblem>();
      } else if (!in_path.empty()) {
        const AttackedScenario scn = read_json_file(in_path).get<AttackedScenario>();
        IdSet sub;
        if (ids_arg.empty()) {
          for (int i = 0; i < scn.swarm.size(); ++i) sub.insert(i);
        } else {
          for (const auto& t : split_list(ids_arg)) sub.insert(std::stoi(t));
        }
        problem = assemble(sub, scn, cfg.detector_options().assembly);
      } else {
        throw std::invalid_argument("oracle-check needs --problem or --in");
      }
      OracleOptions opts = cfg.oracle;
      if (!method.empty()) opts.method = oracle_method_from_string(method);
      if (!dump_path.empty()) write_json_file(dump_path, problem_dump(problem));
      const OracleResult r = check_feasibility(problem, opts);
      json j = r;
      j["node_order"] = problem.node_order;
      j["constraint_count"] = constraint_count(problem);
      write_json_file(out_path, j);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
