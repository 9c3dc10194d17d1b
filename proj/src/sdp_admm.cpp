// Operator splitting on the lifted phase-I program
//
//   min t  s.t.  Z ⪰ 0,  Z11 = I,  a_f = Tr(Ĝ_f Z),  lo_f - t <= a_f <= hi_f + t,  t >= -t_cap
//
// split as (Z, a, t) in the affine set {Z11 = I, a = 𝒜(Z)} against
// (Z~, a~, t~) in {Z~ ⪰ 0} x {box, t~ >= -t_cap} carrying the objective.
// The affine projection decouples per node (X_i, Y_ii, a_f for f at i); the
// second block is an eigenvalue clip plus a 1-D piecewise-quadratic prox.
//
// The data are centred on the reported centroid and scaled by 1/d before
// solving; both are congruences of Z and are undone on the way out.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sdp_solvers.hpp"

namespace sdpguard::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Functional {
  int node = 0;
  Position3 anchor;  // scaled x_hat_j
  double lo = -kInf;
  double hi = 0.0;
};

struct NodeBlock {
  std::vector<int> fs;  // functional indices at this node
  Eigen::LDLT<MatrixXd> gram;
};

MatrixXd psd_project(const MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (M + M.transpose()));
  const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

// argmin_t t + rho/2 (t - t_hat)^2 + rho/2 sum dist^2(a_hat_f, [lo_f - t, hi_f + t])
double slack_prox(const std::vector<Functional>& fs, const VectorXd& a_hat, double t_hat, double rho,
                  double t_lb, std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t f = 0; f < fs.size(); ++f) {
    scratch.push_back(a_hat(f) - fs[f].hi);
    if (std::isfinite(fs[f].lo)) scratch.push_back(fs[f].lo - a_hat(f));
  }
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  // derivative on the piece with the k largest breakpoints active:
  // 1 + rho (t - t_hat) - rho (S_k - k t)
  double s_k = 0.0;
  double t = t_hat - 1.0 / rho;
  for (std::size_t k = 0;; ++k) {
    t = (rho * t_hat + rho * s_k - 1.0) / (rho * (1.0 + static_cast<double>(k)));
    if (k == scratch.size() || t >= scratch[k]) break;
    s_k += scratch[k];
  }
  return std::max(t, t_lb);
}

}  // namespace

SolverOutput solve_lifted_admm(const FeasibilityProblem& problem, const OracleOptions& options) {
  const int n = problem.size();
  const int dim = 3 + n;
  const double d = problem.comm_range;
  const double s2 = 1.0 / (d * d);

  Position3 centroid = Position3::Zero();
  for (const auto& p : problem.reported) centroid += p;
  if (n > 0) centroid /= n;
  std::vector<Position3> xh(n);
  for (int k = 0; k < n; ++k) xh[k] = (problem.reported[k] - centroid) / d;

  std::vector<Functional> fs;
  for (const auto& c : problem.pairs) {
    const PairBounds pb = pair_bounds(problem, c);
    fs.push_back({problem.local_index(c.i), xh[problem.local_index(c.j)], pb.lo * s2, pb.hi * s2});
  }
  for (int k = 0; k < n; ++k) fs.push_back({k, xh[k], -kInf, problem.epsilon * s2});
  const int nf = static_cast<int>(fs.size());

  double t_lb = -options.t_cap * s2;
  for (const auto& f : fs)
    if (std::isfinite(f.lo)) t_lb = std::max(t_lb, 0.5 * (f.lo - f.hi));

  // Affine projection per node with Frobenius weights: X_i appears twice in
  // the symmetric matrix (weight 2), Y_ii and every a_f once.
  std::vector<NodeBlock> blocks(n);
  for (int f = 0; f < nf; ++f) blocks[fs[f].node].fs.push_back(f);
  for (int k = 0; k < n; ++k) {
    const auto& idx = blocks[k].fs;
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    MatrixXd K(m, m);
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q)
        K(p, q) = 2.0 * fs[idx[p]].anchor.dot(fs[idx[q]].anchor) + 1.0 + (p == q ? 1.0 : 0.0);
    blocks[k].gram.compute(K);
  }

  auto project_affine = [&](MatrixXd& Z, VectorXd& a) {
    Z = 0.5 * (Z + Z.transpose());
    Z.topLeftCorner<3, 3>().setIdentity();
    for (int k = 0; k < n; ++k) {
      const auto& idx = blocks[k].fs;
      const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
      Position3 x = Z.block(0, 3 + k, 3, 1);
      double y = Z(3 + k, 3 + k);
      VectorXd resid(m);
      for (Eigen::Index p = 0; p < m; ++p) {
        const Functional& f = fs[idx[p]];
        resid(p) = a(idx[p]) + 2.0 * f.anchor.dot(x) - y - f.anchor.squaredNorm();
      }
      const VectorXd lambda = blocks[k].gram.solve(resid);
      Position3 dx = Position3::Zero();
      double dy = 0.0;
      for (Eigen::Index p = 0; p < m; ++p) {
        dx += fs[idx[p]].anchor * lambda(p);  // W^-1 C^T: 2 anchor / 2
        dy -= lambda(p);
        a(idx[p]) -= lambda(p);
      }
      x -= dx;
      y -= dy;
      Z.block(0, 3 + k, 3, 1) = x;
      Z.block(3 + k, 0, 1, 3) = x.transpose();
      Z(3 + k, 3 + k) = y;
    }
  };

  // warm start from the rank-3 lift of the reports
  Matrix3X<double> X0(3, n);
  for (int k = 0; k < n; ++k) X0.col(k) = xh[k];
  MatrixXd Zt = lift(X0);
  VectorXd at(nf);
  for (int f = 0; f < nf; ++f) at(f) = pair_functional(Zt, fs[f].anchor, fs[f].node);
  double tt = 0.0;
  for (int f = 0; f < nf; ++f) {
    tt = std::max(tt, at(f) - fs[f].hi);
    if (std::isfinite(fs[f].lo)) tt = std::max(tt, fs[f].lo - at(f));
  }

  MatrixXd UZ = MatrixXd::Zero(dim, dim);
  VectorXd ua = VectorXd::Zero(nf);
  double ut = 0.0;
  double rho = options.admm_rho;
  MatrixXd Z(dim, dim);
  VectorXd a(nf);
  double t = tt;
  std::vector<double> scratch;

  SolverOutput out;
  out.converged = false;
  constexpr double kTol = 1e-9;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Z = Zt - UZ;
    a = at - ua;
    project_affine(Z, a);
    t = tt - ut;

    const MatrixXd Zt_prev = Zt;
    const VectorXd at_prev = at;
    const double tt_prev = tt;

    Zt = psd_project(Z + UZ);
    const VectorXd a_hat = a + ua;
    tt = slack_prox(fs, a_hat, t + ut, rho, t_lb, scratch);
    for (int f = 0; f < nf; ++f) at(f) = std::clamp(a_hat(f), fs[f].lo - tt, fs[f].hi + tt);

    UZ += Z - Zt;
    ua += a - at;
    ut += t - tt;

    const double r_prim = std::sqrt((Z - Zt).squaredNorm() + (a - at).squaredNorm() + (t - tt) * (t - tt));
    const double r_dual = rho * std::sqrt((Zt - Zt_prev).squaredNorm() + (at - at_prev).squaredNorm() +
                                          (tt - tt_prev) * (tt - tt_prev));
    out.iterations = it;
    if (r_prim <= kTol && r_dual <= kTol) {
      out.converged = true;
      break;
    }
    if (it % 25 == 0) {
      if (r_prim > 10.0 * r_dual) {
        rho *= 2.0;
        UZ /= 2.0;
        ua /= 2.0;
        ut /= 2.0;
      } else if (r_dual > 10.0 * r_prim) {
        rho /= 2.0;
        UZ *= 2.0;
        ua *= 2.0;
        ut *= 2.0;
      }
    }
  }
  if (!out.converged) out.message = "lifted ADMM hit the iteration limit";

  // undo scaling (diag(I3, d I)) and centring (T = [[I, c 1^T], [0, I]])
  MatrixXd Zs = Zt;
  Zs.topRightCorner(3, n) *= d;
  Zs.bottomLeftCorner(n, 3) *= d;
  Zs.bottomRightCorner(n, n) *= d * d;
  MatrixXd T = MatrixXd::Identity(dim, dim);
  T.topRightCorner(3, n) = centroid * Eigen::RowVectorXd::Ones(n);
  out.Z = T.transpose() * Zs * T;
  out.t_star = tt * d * d;
  return out;
}

}  // namespace sdpguard::detail
