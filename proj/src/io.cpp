#include "sdpguard/io.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

namespace sdpguard {

namespace {

json vec3(const Position3& p) { return json::array({p.x(), p.y(), p.z()}); }

Position3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-vector, got " + j.dump());
  return Position3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json ids(const IdSet& s) { return json(std::vector<int>(s.begin(), s.end())); }

IdSet ids(const json& j) {
  IdSet out;
  for (const auto& v : j) out.insert(v.get<int>());
  return out;
}

// Rejects keys outside `known` so that typos in hand-written configs fail loudly.
void check_keys(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw std::invalid_argument(std::string("unknown key '") + k + "' in " + what);
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <typename T>
void maybe_opt(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    out.reset();
  else
    out = j.at(key).get<T>();
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const Swarm& s) {
  json uavs = json::array();
  for (const auto& u : s.uavs)
    uavs.push_back({{"id", u.id}, {"true_pos", vec3(u.true_pos)}, {"reported_pos", vec3(u.reported_pos)},
                    {"malicious", u.malicious}});
  j = {{"comm_range", s.comm_range}, {"cube_half_width", s.cube_half_width}, {"seed", s.seed}, {"uavs", uavs}};
}

void from_json(const json& j, Swarm& s) {
  s = Swarm{};
  s.comm_range = j.at("comm_range").get<double>();
  s.cube_half_width = j.at("cube_half_width").get<double>();
  maybe(j, "seed", s.seed);
  for (const auto& u : j.at("uavs")) {
    Uav v;
    v.id = u.at("id").get<int>();
    v.true_pos = vec3(u.at("true_pos"));
    v.reported_pos = u.contains("reported_pos") ? vec3(u.at("reported_pos")) : v.true_pos;
    maybe(u, "malicious", v.malicious);
    s.uavs.push_back(v);
  }
  s.validate();
}

void to_json(json& j, const MeasurementSet& m) {
  json entries = json::array();
  for (const auto& [p, r] : m.entries()) entries.push_back({p.from, p.to, r});
  j = {{"n", m.size()}, {"entries", entries}};
}

void from_json(const json& j, MeasurementSet& m) {
  m = MeasurementSet(j.at("n").get<int>());
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("measurement entries are [i, j, r]");
    m.set(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
  }
}

void to_json(json& j, const AttackSettings& s) {
  j = {{"fake_offset_min", s.fake_offset_min}, {"claim_model", to_string(s.claims)},
       {"collusion_margin", s.collusion_margin}, {"framing_margin", s.framing_margin},
       {"dist_var", s.dist_var}, {"max_rejections", s.max_rejections}};
}

void from_json(const json& j, AttackSettings& s) {
  check_keys(j, {"fake_offset_min", "claim_model", "collusion_margin", "framing_margin", "dist_var", "max_rejections"},
             "attack settings");
  s = AttackSettings{};
  maybe(j, "fake_offset_min", s.fake_offset_min);
  if (j.contains("claim_model")) s.claims = claim_model_from_string(j.at("claim_model").get<std::string>());
  maybe(j, "collusion_margin", s.collusion_margin);
  maybe(j, "framing_margin", s.framing_margin);
  maybe(j, "dist_var", s.dist_var);
  maybe(j, "max_rejections", s.max_rejections);
}

void to_json(json& j, const AttackPlan& p) {
  j = {{"kind", to_string(p.kind)},
       {"malicious_ids", ids(p.malicious_ids)},
       {"distributed_ids", ids(p.distributed_ids)},
       {"collusion_ids", ids(p.collusion_ids)},
       {"target", opt(p.target)},
       {"settings", p.settings},
       {"seed", p.seed}};
}

void from_json(const json& j, AttackPlan& p) {
  check_keys(j, {"kind", "malicious_ids", "distributed_ids", "collusion_ids", "target", "settings", "seed"},
             "attack plan");
  p = AttackPlan{};
  p.kind = attack_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("malicious_ids")) p.malicious_ids = ids(j.at("malicious_ids"));
  if (j.contains("distributed_ids")) p.distributed_ids = ids(j.at("distributed_ids"));
  if (j.contains("collusion_ids")) p.collusion_ids = ids(j.at("collusion_ids"));
  if (p.malicious_ids.empty()) {
    p.malicious_ids = p.distributed_ids;
    p.malicious_ids.insert(p.collusion_ids.begin(), p.collusion_ids.end());
  }
  maybe_opt(j, "target", p.target);
  if (j.contains("settings")) p.settings = j.at("settings").get<AttackSettings>();
  maybe(j, "seed", p.seed);
}

void to_json(json& j, const AttackedScenario& s) {
  j = {{"swarm", s.swarm}, {"measurements", s.measurements}, {"plan", s.plan}};
}

void from_json(const json& j, AttackedScenario& s) {
  s.swarm = j.at("swarm").get<Swarm>();
  s.measurements = j.at("measurements").get<MeasurementSet>();
  if (s.measurements.size() != s.swarm.size()) throw std::invalid_argument("measurement set does not match swarm");
  s.plan = j.contains("plan") ? j.at("plan").get<AttackPlan>() : AttackPlan{};
}

void to_json(json& j, const SuspectSets& s) { j = {{"suspected", ids(s.suspected)}, {"trusted", ids(s.trusted)}}; }

void from_json(const json& j, SuspectSets& s) {
  s.suspected = ids(j.at("suspected"));
  s.trusted = ids(j.at("trusted"));
}

void to_json(json& j, const FeasibilityProblem& p) {
  json pos = json::array(), pairs = json::array();
  for (const auto& x : p.reported) pos.push_back(vec3(x));
  for (const auto& c : p.pairs) pairs.push_back({c.i, c.j, c.r_hat});
  j = {{"node_order", p.node_order}, {"reported_positions", pos}, {"pairs", pairs},
       {"comm_range", p.comm_range}, {"epsilon", p.epsilon}, {"delta", p.delta},
       {"tolerance_sq", p.tolerance_sq}};
}

void from_json(const json& j, FeasibilityProblem& p) {
  check_keys(j, {"node_order", "reported_positions", "pairs", "comm_range", "epsilon", "delta", "tolerance_sq"},
             "feasibility problem");
  p = FeasibilityProblem{};
  p.node_order = j.at("node_order").get<std::vector<int>>();
  for (const auto& x : j.at("reported_positions")) p.reported.push_back(vec3(x));
  for (const auto& e : j.at("pairs")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("pairs are [i, j, r]");
    p.pairs.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  p.comm_range = j.at("comm_range").get<double>();
  maybe(j, "epsilon", p.epsilon);
  maybe(j, "delta", p.delta);
  p.tolerance_sq = 0.25 * p.comm_range * p.comm_range;
  maybe(j, "tolerance_sq", p.tolerance_sq);
  p.validate();
}

void to_json(json& j, const OracleOptions& o) {
  j = {{"method", to_string(o.method)}, {"max_iterations", o.max_iterations}, {"tol_feas", o.tol_feas},
       {"tol_infeas", o.tol_infeas},   {"tol_res", o.tol_res},               {"t_cap", o.t_cap},
       {"admm_rho", o.admm_rho},       {"recover", o.recover}};
}

void from_json(const json& j, OracleOptions& o) {
  check_keys(j, {"method", "max_iterations", "tol_feas", "tol_infeas", "tol_res", "t_cap", "admm_rho", "recover"},
             "oracle options");
  o = OracleOptions{};
  if (j.contains("method")) o.method = oracle_method_from_string(j.at("method").get<std::string>());
  maybe(j, "max_iterations", o.max_iterations);
  maybe(j, "tol_feas", o.tol_feas);
  maybe(j, "tol_infeas", o.tol_infeas);
  maybe(j, "tol_res", o.tol_res);
  maybe(j, "t_cap", o.t_cap);
  maybe(j, "admm_rho", o.admm_rho);
  maybe(j, "recover", o.recover);
}

void to_json(json& j, const OracleResult& r) {
  json rec = nullptr;
  if (r.recovered_positions) {
    rec = json::array();
    for (const auto& p : *r.recovered_positions) rec.push_back(vec3(p));
  }
  j = {{"status", to_string(r.status)},
       {"phase1_slack", r.phase1_slack},
       {"max_residual", r.max_residual},
       {"iterations", r.iterations},
       {"recovered_positions", rec},
       {"rank_gap", opt(r.rank_gap)},
       {"message", r.message}};
}

void to_json(json& j, const DetectionResult& r) {
  json trace = json::array();
  for (const auto& e : r.trace)
    trace.push_back({{"pass", e.pass},
                     {"kind", to_string(e.kind)},
                     {"assessed", e.assessed},
                     {"subnetwork_size", e.subnetwork_size},
                     {"status", e.status ? json(to_string(*e.status)) : json(nullptr)},
                     {"cached", e.cached},
                     {"exonerated", ids(e.exonerated)}});
  j = {{"algorithm", r.algorithm},
       {"initial", r.initial},
       {"predicted_malicious", ids(r.predicted_malicious)},
       {"passes", r.passes},
       {"oracle_calls", r.oracle_calls},
       {"trusted_base_infeasible", r.trusted_base_infeasible},
       {"oracle_breakdown", r.oracle_breakdown},
       {"trace", trace}};
}

void to_json(json& j, const ExperimentConfig& c) {
  json algs = json::array();
  for (Algorithm a : c.algorithms) algs.push_back(to_string(a));
  j = {{"n_uavs", c.n_uavs},
       {"malicious_count", c.malicious_count},
       {"comm_range", c.comm_range},
       {"cube_half_width", c.cube_half_width},
       {"pos_var", c.noise.pos_var},
       {"dist_var", c.noise.dist_var},
       {"attack", to_string(c.attack)},
       {"collusion_target", opt(c.collusion_target)},
       {"fake_offset_min", opt(c.fake_offset_min)},
       {"claim_model", to_string(c.attack_settings.claims)},
       {"collusion_margin", c.attack_settings.collusion_margin},
       {"framing_margin", c.attack_settings.framing_margin},
       {"max_rejections", c.attack_settings.max_rejections},
       {"epsilon", c.assembly.epsilon},
       {"epsilon_multiplier", c.assembly.epsilon_multiplier},
       {"delta", c.assembly.delta},
       {"tolerance_sq", opt(c.assembly.tolerance_sq)},
       {"unscaled_epsilon", c.unscaled_epsilon},
       {"oracle", c.oracle},
       {"neighborhood", to_string(c.neighborhood)},
       {"ecdi_schedule", c.schedule == EcdiSchedule::kNeighborhoodFirst ? "neighborhood_first" : "interleaved"},
       {"require_connectivity", c.require_connectivity},
       {"algorithms", algs},
       {"sweep", {{"param", to_string(c.sweep_param)}, {"values", c.sweep_values}}},
       {"trials_per_point", c.trials_per_point},
       {"base_seed", c.base_seed},
       {"record_runtime", c.record_runtime},
       {"threads", c.threads},
       {"output_path", c.output_path}};
}

void from_json(const json& j, ExperimentConfig& c) {
  check_keys(j,
             {"n_uavs", "malicious_count", "comm_range", "cube_half_width", "pos_var", "dist_var", "attack",
              "collusion_target", "fake_offset_min", "claim_model", "collusion_margin", "framing_margin",
              "max_rejections", "epsilon", "epsilon_multiplier", "delta", "tolerance_sq", "unscaled_epsilon",
              "oracle", "neighborhood", "ecdi_schedule", "require_connectivity", "algorithms", "sweep",
              "trials_per_point", "base_seed", "record_runtime", "threads", "output_path"},
             "experiment config");
  c = ExperimentConfig{};
  maybe(j, "n_uavs", c.n_uavs);
  maybe(j, "malicious_count", c.malicious_count);
  maybe(j, "comm_range", c.comm_range);
  maybe(j, "cube_half_width", c.cube_half_width);
  maybe(j, "pos_var", c.noise.pos_var);
  maybe(j, "dist_var", c.noise.dist_var);
  if (j.contains("attack")) c.attack = attack_kind_from_string(j.at("attack").get<std::string>());
  maybe_opt(j, "collusion_target", c.collusion_target);
  maybe_opt(j, "fake_offset_min", c.fake_offset_min);
  if (j.contains("claim_model"))
    c.attack_settings.claims = claim_model_from_string(j.at("claim_model").get<std::string>());
  maybe(j, "collusion_margin", c.attack_settings.collusion_margin);
  maybe(j, "framing_margin", c.attack_settings.framing_margin);
  maybe(j, "max_rejections", c.attack_settings.max_rejections);
  maybe(j, "epsilon", c.assembly.epsilon);
  maybe(j, "epsilon_multiplier", c.assembly.epsilon_multiplier);
  maybe(j, "delta", c.assembly.delta);
  maybe_opt(j, "tolerance_sq", c.assembly.tolerance_sq);
  maybe(j, "unscaled_epsilon", c.unscaled_epsilon);
  if (j.contains("oracle")) c.oracle = j.at("oracle").get<OracleOptions>();
  if (j.contains("neighborhood"))
    c.neighborhood = neighborhood_rule_from_string(j.at("neighborhood").get<std::string>());
  if (j.contains("ecdi_schedule")) {
    const auto s = j.at("ecdi_schedule").get<std::string>();
    if (s == "neighborhood_first")
      c.schedule = EcdiSchedule::kNeighborhoodFirst;
    else if (s == "interleaved")
      c.schedule = EcdiSchedule::kInterleaved;
    else
      throw std::invalid_argument("unknown ecdi_schedule '" + s + "'");
  }
  maybe(j, "require_connectivity", c.require_connectivity);
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"param", "values"}, "sweep");
    c.sweep_param = sweep_param_from_string(s.at("param").get<std::string>());
    c.sweep_values = s.at("values").get<std::vector<double>>();
  } else {
    c.sweep_param = SweepParam::kMaliciousCount;
    c.sweep_values = {static_cast<double>(c.malicious_count)};
  }
  maybe(j, "trials_per_point", c.trials_per_point);
  maybe(j, "base_seed", c.base_seed);
  maybe(j, "record_runtime", c.record_runtime);
  maybe(j, "threads", c.threads);
  maybe(j, "output_path", c.output_path);
  c.validate();
}

json problem_dump(const FeasibilityProblem& problem) {
  problem.validate();
  const int n = problem.size();
  const int dim = problem.dimension();
  json matrices = json::array();
  json constraints = json::array();
  auto dense = [&](const MatrixX<double>& M) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(dim) * dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) flat.push_back(M(r, c));
    return flat;
  };
  MatrixX<double> E = MatrixX<double>::Zero(dim, dim);
  E.topLeftCorner<3, 3>().setIdentity();
  matrices.push_back(dense(E));
  constraints.push_back({{"type", "identity_block"}, {"i", nullptr}, {"j", nullptr}, {"bound", nullptr}, {"matrix", 0}});

  // one Ĝ per directed pair and per self row, shared by that pair's rows
  std::map<std::pair<int, int>, int> index;
  for (const auto& row : constraint_rows(problem)) {
    auto key = std::make_pair(row.i, row.j);
    auto it = index.find(key);
    if (it == index.end()) {
      const Position3& xj = problem.reported[problem.local_index(row.j)];
      matrices.push_back(dense(ghat<double>(xj, problem.local_index(row.i), n)));
      it = index.emplace(key, static_cast<int>(matrices.size()) - 1).first;
    }
    constraints.push_back({{"type", to_string(row.kind)}, {"i", row.i}, {"j", row.j},
                           {"bound", row.bound}, {"matrix", it->second}});
  }
  return {{"dimension", dim}, {"node_order", problem.node_order}, {"layout", "row_major"},
          {"matrices", matrices}, {"constraints", constraints}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace sdpguard
