#include "sdpguard/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sdp_solvers.hpp"

namespace sdpguard {

int FeasibilityProblem::local_index(int id) const {
  auto it = std::lower_bound(node_order.begin(), node_order.end(), id);
  if (it == node_order.end() || *it != id)
    throw std::out_of_range("id " + std::to_string(id) + " is not part of the sub-network");
  return static_cast<int>(it - node_order.begin());
}

void FeasibilityProblem::validate() const {
  if (reported.size() != node_order.size())
    throw std::invalid_argument("reported positions do not match node_order");
  if (!std::is_sorted(node_order.begin(), node_order.end()) ||
      std::adjacent_find(node_order.begin(), node_order.end()) != node_order.end())
    throw std::invalid_argument("node_order must be strictly ascending");
  if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  if (!(tolerance_sq > 0.0)) throw std::invalid_argument("tolerance must be positive");
  for (const auto& p : reported)
    if (!p.allFinite()) throw std::invalid_argument("non-finite reported position");
  for (const auto& c : pairs) {
    local_index(c.i);
    local_index(c.j);
    if (c.i == c.j) throw std::invalid_argument("self pair in problem");
    if (!(c.r_hat > 0.0) || !std::isfinite(c.r_hat))
      throw std::invalid_argument("measured distances must be positive");
  }
}

void AssemblyParams::validate() const {
  if (!(epsilon > 0.0) || !(epsilon_multiplier > 0.0))
    throw std::invalid_argument("epsilon and its multiplier must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  if (tolerance_sq && !(*tolerance_sq > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

FeasibilityProblem assemble(const IdSet& sub_ids, const AttackedScenario& scenario,
                            const AssemblyParams& params) {
  params.validate();
  const Swarm& s = scenario.swarm;
  FeasibilityProblem p;
  p.comm_range = s.comm_range;
  p.epsilon = params.effective_epsilon();
  p.delta = params.delta;
  p.tolerance_sq = measurement_tolerance(s.comm_range, params.tolerance_sq);
  for (int id : sub_ids) {
    if (id < 0 || id >= s.size()) throw std::out_of_range("sub-network id out of range");
    p.node_order.push_back(id);
    p.reported.push_back(s.uavs[id].reported_pos);
  }
  for (const auto& [key, r] : scenario.measurements.entries())
    if (sub_ids.count(key.from) && sub_ids.count(key.to)) p.pairs.push_back({key.from, key.to, r});
  return p;
}

std::string to_string(RowKind kind) {
  switch (kind) {
    case RowKind::kRangeUpper: return "range_upper";
    case RowKind::kMeasurementUpper: return "measurement_upper";
    case RowKind::kMeasurementLower: return "measurement_lower";
    case RowKind::kSelfUpper: return "self_upper";
  }
  return "range_upper";
}

std::vector<ConstraintRow> constraint_rows(const FeasibilityProblem& problem) {
  const double d2 = problem.comm_range * problem.comm_range;
  const double h = problem.tolerance_sq;
  std::vector<ConstraintRow> rows;
  rows.reserve(3 * problem.pairs.size() + problem.node_order.size());
  for (const auto& c : problem.pairs) {
    const double r2 = c.r_hat * c.r_hat;
    rows.push_back({RowKind::kRangeUpper, c.i, c.j, d2 - problem.delta});
    rows.push_back({RowKind::kMeasurementUpper, c.i, c.j, r2 + h - problem.delta});
    rows.push_back({RowKind::kMeasurementLower, c.i, c.j, r2 - h + problem.delta});
  }
  for (int id : problem.node_order) rows.push_back({RowKind::kSelfUpper, id, id, problem.epsilon});
  return rows;
}

std::size_t constraint_count(const FeasibilityProblem& problem) {
  return 3 * problem.pairs.size() + problem.node_order.size() + 1;
}

double max_violation(const FeasibilityProblem& problem, const MatrixX<double>& Z) {
  if (Z.rows() != problem.dimension() || Z.cols() != problem.dimension())
    throw std::invalid_argument("lifted matrix has the wrong dimension");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : constraint_rows(problem)) {
    const int li = problem.local_index(row.i);
    const Position3& xj = problem.reported[problem.local_index(row.j)];
    worst = std::max(worst, row.violation(pair_functional(Z, xj, li)));
  }
  return worst;
}

double structural_residual(const MatrixX<double>& Z) {
  if (Z.rows() < 3 || Z.rows() != Z.cols()) throw std::invalid_argument("lifted matrix must be square, dim >= 3");
  double r = (Z - Z.transpose()).cwiseAbs().maxCoeff();
  r = std::max(r, (Z.topLeftCorner<3, 3>() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
  const MatrixX<double> sym = 0.5 * (Z + Z.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixX<double>> eig(sym, Eigen::EigenvaluesOnly);
  r = std::max(r, -eig.eigenvalues()(0));
  return std::max(r, 0.0);
}

std::string to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::kFeasible: return "feasible";
    case OracleStatus::kInfeasible: return "infeasible";
    case OracleStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(OracleMethod method) {
  return method == OracleMethod::kNodeReduction ? "node_reduction" : "lifted_admm";
}

OracleMethod oracle_method_from_string(const std::string& s) {
  if (s == "node_reduction") return OracleMethod::kNodeReduction;
  if (s == "lifted_admm" || s == "admm") return OracleMethod::kLiftedAdmm;
  throw std::invalid_argument("unknown oracle method '" + s + "'");
}

void OracleOptions::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tol_feas > 0.0) || !(tol_infeas >= tol_feas))
    throw std::invalid_argument("need 0 < tol_feas <= tol_infeas");
  if (!(tol_res > 0.0)) throw std::invalid_argument("tol_res must be positive");
  if (!(t_cap > 0.0)) throw std::invalid_argument("t_cap must be positive");
  if (!(admm_rho > 0.0)) throw std::invalid_argument("admm_rho must be positive");
}

OracleStatus classify_slack(double t_star, const OracleOptions& options) {
  if (t_star <= options.tol_feas) return OracleStatus::kFeasible;
  if (t_star >= options.tol_infeas) return OracleStatus::kInfeasible;
  return OracleStatus::kUnknown;
}

namespace detail {

PairBounds pair_bounds(const FeasibilityProblem& problem, const ConstraintPair& pair) {
  const double d2 = problem.comm_range * problem.comm_range;
  const double r2 = pair.r_hat * pair.r_hat;
  return {r2 - problem.tolerance_sq + problem.delta,
          std::min(d2, r2 + problem.tolerance_sq) - problem.delta};
}

}  // namespace detail

OracleResult check_feasibility(const FeasibilityProblem& problem, const OracleOptions& options) {
  problem.validate();
  options.validate();

  detail::SolverOutput out = options.method == OracleMethod::kNodeReduction
                                 ? detail::solve_node_reduction(problem, options)
                                 : detail::solve_lifted_admm(problem, options);

  OracleResult res;
  res.phase1_slack = out.t_star;
  res.iterations = out.iterations;
  res.message = out.message;
  res.lifted = std::move(out.Z);

  const int n = problem.size();
  double relax = std::max(out.t_star, 0.0);
  double viol = n > 0 ? max_violation(problem, res.lifted) : 0.0;
  res.max_residual = std::max(structural_residual(res.lifted), std::max(0.0, viol - relax));

  if (!out.converged) {
    res.status = OracleStatus::kUnknown;
  } else {
    res.status = classify_slack(out.t_star, options);
    if (res.status == OracleStatus::kFeasible && res.max_residual > options.tol_res) {
      res.status = OracleStatus::kUnknown;
      res.message = "feasible slack but lifted residual above tol_res";
    }
  }

  if (res.status == OracleStatus::kFeasible) {
    std::vector<Position3> rec(n);
    for (int k = 0; k < n; ++k) rec[k] = res.lifted.block(0, 3 + k, 3, 1);
    res.recovered_positions = std::move(rec);
  }

  if (n >= 1) {
    const MatrixX<double> sym = 0.5 * (res.lifted + res.lifted.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixX<double>> eig(sym, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();  // ascending
    const Eigen::Index dim = ev.size();
    const double l3 = ev(dim - 3), l4 = ev(dim - 4);
    if (l3 > 0.0) res.rank_gap = std::max(l4, 0.0) / l3;
  }
  return res;
}

}  // namespace sdpguard
