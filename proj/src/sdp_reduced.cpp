// With the top-left block of Z pinned to I3, every constraint on node i reads
//   a_ij = |x_hat_j|^2 - 2 x_hat_j^T X_i + Y_ii
// and the PSD condition on the entries that matter collapses to
// Y_ii >= |X_i|^2 (any Y = X^T X + diag(s), s >= 0, completes Z). The lifted
// program therefore splits into one tiny conic program per node in
// (x, y, t), and t* is the largest per-node optimum.
//
// Each node program is solved in coordinates centred on x_hat_i
// (u = x - x_hat_i, w = a_ii) with a plain log-barrier method, so that the
// O(d^2) quantities are never formed by cancelling O(1) ones.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "sdp_solvers.hpp"

namespace sdpguard::detail {
namespace {

using Eigen::VectorXd;
using Eigen::MatrixXd;

// minimize c.v  s.t.  A v <= b,  v(3) >= |v(0:3)|^2
struct ConicLp {
  MatrixXd A;
  VectorXd b;
  VectorXd c;
};

struct BarrierRun {
  VectorXd v;
  int steps = 0;
  bool ok = true;
};

bool strictly_inside(const ConicLp& P, const VectorXd& v) {
  if (v(3) - v.head<3>().squaredNorm() <= 0.0) return false;
  return ((P.b - P.A * v).array() > 0.0).all();
}

BarrierRun barrier_minimize(const ConicLp& P, VectorXd v, double gap_tol, int budget) {
  const Eigen::Index dim = v.size();
  const double nu = static_cast<double>(P.A.rows()) + 1.0;
  BarrierRun run;
  double tau = 1.0;
  for (;;) {
    for (int inner = 0; inner < 200; ++inner) {
      const VectorXd s = P.b - P.A * v;
      const VectorXd inv_s = s.cwiseInverse();
      const double q = v(3) - v.head<3>().squaredNorm();

      VectorXd dq = VectorXd::Zero(dim);
      dq.head<3>() = -2.0 * v.head<3>();
      dq(3) = 1.0;

      VectorXd g = tau * P.c + P.A.transpose() * inv_s - dq / q;
      MatrixXd H = P.A.transpose() * inv_s.cwiseAbs2().asDiagonal() * P.A + dq * dq.transpose() / (q * q);
      H.diagonal().head<3>().array() += 2.0 / q;

      Eigen::LDLT<MatrixXd> ldlt(H);
      if (ldlt.info() != Eigen::Success) {
        run.ok = false;
        run.v = v;
        return run;
      }
      const VectorXd dv = -ldlt.solve(g);
      const double lambda2 = -g.dot(dv);
      if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
        run.ok = false;
        run.v = v;
        return run;
      }
      if (lambda2 <= 1e-14) break;

      // damped Newton keeps a self-concordant barrier inside its domain; the
      // halving loop only guards against round-off at the boundary
      double step = lambda2 > 0.0625 ? 1.0 / (1.0 + std::sqrt(lambda2)) : 1.0;
      VectorXd trial = v + step * dv;
      while (!strictly_inside(P, trial) && step > 1e-16) {
        step *= 0.5;
        trial = v + step * dv;
      }
      if (step <= 1e-16) break;
      v = trial;
      if (++run.steps > budget) {
        run.ok = false;
        run.v = v;
        return run;
      }
      if (lambda2 <= 1e-10 && step == 1.0) break;
    }
    if (nu / tau < gap_tol) break;
    tau *= 20.0;
  }
  run.v = v;
  return run;
}

struct NodeRows {
  MatrixXd A;  // columns (u, w), no slack column yet
  VectorXd b;
};

// Rows "coeff . (u, w) <= rhs" of node k in local coordinates.
NodeRows node_rows(const FeasibilityProblem& problem, int k) {
  const Position3& anchor = problem.reported[k];
  const int id = problem.node_order[k];
  std::vector<const ConstraintPair*> mine;
  for (const auto& c : problem.pairs)
    if (c.i == id) mine.push_back(&c);

  NodeRows rows;
  rows.A.resize(2 * mine.size() + 1, 4);
  rows.b.resize(2 * mine.size() + 1);
  Eigen::Index r = 0;
  for (const ConstraintPair* c : mine) {
    const Position3 rel = problem.reported[problem.local_index(c->j)] - anchor;
    const PairBounds pb = pair_bounds(problem, *c);
    const double kappa = rel.squaredNorm();
    // a = kappa - 2 rel.u + w
    rows.A.row(r) << -2.0 * rel.transpose(), 1.0;
    rows.b(r++) = pb.hi - kappa;
    rows.A.row(r) << 2.0 * rel.transpose(), -1.0;
    rows.b(r++) = kappa - pb.lo;
  }
  rows.A.row(r) << 0.0, 0.0, 0.0, 1.0;
  rows.b(r) = problem.epsilon;
  return rows;
}

}  // namespace

SolverOutput solve_node_reduction(const FeasibilityProblem& problem, const OracleOptions& options) {
  const int n = problem.size();
  const double d2 = problem.comm_range * problem.comm_range;
  const int budget = std::min(options.max_iterations, 2000);
  constexpr double kPhaseOneGap = 1e-11;
  constexpr double kPhaseTwoGap = 1e-13;

  SolverOutput out;
  out.t_star = -options.t_cap;
  std::vector<NodeRows> rows(n);
  std::vector<VectorXd> uw(n);
  std::vector<double> t_node(n, -options.t_cap);

  for (int k = 0; k < n; ++k) {
    rows[k] = node_rows(problem, k);
    const Eigen::Index m = rows[k].A.rows();
    ConicLp P;
    P.A = MatrixXd::Zero(m + 1, 5);
    P.A.leftCols<4>().topRows(m) = rows[k].A;
    P.A.col(4).head(m).setConstant(-1.0);
    P.A(m, 4) = -1.0;
    P.b.resize(m + 1);
    P.b << rows[k].b, options.t_cap;
    P.c = VectorXd::Zero(5);
    P.c(4) = 1.0;

    VectorXd v = VectorXd::Zero(5);
    v(3) = 1e-2 * d2;
    v(4) = std::max((rows[k].A * v.head<4>() - rows[k].b).maxCoeff(), -options.t_cap) + 1.0;

    BarrierRun run = barrier_minimize(P, v, kPhaseOneGap, budget);
    out.iterations += run.steps;
    if (!run.ok) {
      out.converged = false;
      out.message = "barrier phase I stalled at node " + std::to_string(problem.node_order[k]);
    }
    uw[k] = run.v.head<4>();
    t_node[k] = run.v(4);
    out.t_star = std::max(out.t_star, t_node[k]);
  }

  // Recovery: least self-displacement subject to the rows relaxed by t*.
  // Skipped when phase I already rules the sub-network out.
  if (options.recover && out.converged && out.t_star <= options.tol_feas) {
    const double t_fix = std::max(out.t_star, 0.0) + 1e-9;
    for (int k = 0; k < n; ++k) {
      ConicLp P;
      P.A = rows[k].A;
      P.b = rows[k].b.array() + t_fix;
      P.c = VectorXd::Zero(4);
      P.c(3) = 1.0;
      if (!strictly_inside(P, uw[k])) continue;  // keep the phase I point
      BarrierRun run = barrier_minimize(P, uw[k], kPhaseTwoGap, budget);
      out.iterations += run.steps;
      if (run.ok) uw[k] = run.v;
    }
  }

  Matrix3X<double> X(3, n);
  VectorXd excess(n);
  for (int k = 0; k < n; ++k) {
    X.col(k) = problem.reported[k] + uw[k].head<3>();
    excess(k) = std::max(uw[k](3) - uw[k].head<3>().squaredNorm(), 0.0);
  }
  out.Z = lift(X, excess);
  return out;
}

}  // namespace sdpguard::detail
