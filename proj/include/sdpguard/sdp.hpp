#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdpguard/suspects.hpp"

namespace sdpguard {

// ---------------------------------------------------------------------------
// Lifted-matrix algebra. Z = [[I3, X], [X^T, Y]] with X = 3 x n positions.

// Ĝ such that Tr(Ĝ Z) = |x_hat_j|^2 - 2 x_hat_j^T X_i + Y_ii for node i.
template <typename Scalar>
MatrixX<Scalar> ghat(const Vector3<Scalar>& x_hat_j, int i, int n_sub) {
  MatrixX<Scalar> G = MatrixX<Scalar>::Zero(3 + n_sub, 3 + n_sub);
  G.template topLeftCorner<3, 3>() = x_hat_j * x_hat_j.transpose();
  G.block(0, 3 + i, 3, 1) = -x_hat_j;
  G.block(3 + i, 0, 1, 3) = -x_hat_j.transpose();
  G(3 + i, 3 + i) = Scalar(1);
  return G;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_inner(const Eigen::MatrixBase<DerivedA>& A,
                                          const Eigen::MatrixBase<DerivedB>& B) {
  return A.cwiseProduct(B).sum();
}

// Tr(Ĝ(x_hat_j, i) Z) without materializing Ĝ.
template <typename Derived>
typename Derived::Scalar pair_functional(const Eigen::MatrixBase<Derived>& Z,
                                         const Vector3<typename Derived::Scalar>& x_hat_j, int i) {
  const auto top = Z.template topLeftCorner<3, 3>();
  return x_hat_j.dot(top * x_hat_j) - x_hat_j.dot(Z.template block<3, 1>(0, 3 + i)) -
         Z.template block<1, 3>(3 + i, 0).dot(x_hat_j.transpose()) + Z(3 + i, 3 + i);
}

// Rank-3 lift of explicit positions, plus an optional non-negative diagonal
// excess on the Y block.
template <typename DerivedX>
MatrixX<typename DerivedX::Scalar> lift(const Eigen::MatrixBase<DerivedX>& X) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = X.cols();
  MatrixX<Scalar> Z(3 + n, 3 + n);
  Z.template topLeftCorner<3, 3>().setIdentity();
  Z.topRightCorner(3, n) = X;
  Z.bottomLeftCorner(n, 3) = X.transpose();
  Z.bottomRightCorner(n, n) = X.transpose() * X;
  return Z;
}

template <typename DerivedX, typename DerivedS>
MatrixX<typename DerivedX::Scalar> lift(const Eigen::MatrixBase<DerivedX>& X,
                                        const Eigen::MatrixBase<DerivedS>& excess) {
  MatrixX<typename DerivedX::Scalar> Z = lift(X);
  Z.bottomRightCorner(X.cols(), X.cols()).diagonal() += excess;
  return Z;
}

// ---------------------------------------------------------------------------
// Problem data

struct ConstraintPair {
  int i = 0;  // measuring UAV id
  int j = 0;  // measured UAV id
  double r_hat = 0.0;
};

struct FeasibilityProblem {
  std::vector<int> node_order;        // ascending ids
  std::vector<Position3> reported;    // aligned with node_order
  std::vector<ConstraintPair> pairs;  // directed, both endpoints in node_order
  double comm_range = 0.3;
  double epsilon = 1e-5;  // effective ε, multiplier already applied
  double delta = 1e-9;
  double tolerance_sq = 0.0225;

  int size() const { return static_cast<int>(node_order.size()); }
  int dimension() const { return 3 + size(); }
  int local_index(int id) const;  // throws if id is absent
  void validate() const;
};

struct AssemblyParams {
  double epsilon = 1e-6;
  double epsilon_multiplier = 10.0;
  double delta = 1e-9;
  std::optional<double> tolerance_sq;
  double effective_epsilon() const { return epsilon * epsilon_multiplier; }
  void validate() const;
};

FeasibilityProblem assemble(const IdSet& sub_ids, const AttackedScenario& scenario,
                            const AssemblyParams& params = {});

enum class RowKind { kRangeUpper, kMeasurementUpper, kMeasurementLower, kSelfUpper };
std::string to_string(RowKind kind);

// One scalar inequality on Tr(Ĝ_ij Z). Self rows have i == j.
struct ConstraintRow {
  RowKind kind = RowKind::kRangeUpper;
  int i = 0;
  int j = 0;
  double bound = 0.0;
  bool is_upper() const { return kind != RowKind::kMeasurementLower; }
  double violation(double value) const { return is_upper() ? value - bound : bound - value; }
};

std::vector<ConstraintRow> constraint_rows(const FeasibilityProblem& problem);

// Scalar rows plus the identity-block constraint.
std::size_t constraint_count(const FeasibilityProblem& problem);

// Largest row violation of Z (negative means every row holds with slack).
double max_violation(const FeasibilityProblem& problem, const MatrixX<double>& Z);

// Residual of the lifted structure: asymmetry, identity block, negative
// eigenvalues.
double structural_residual(const MatrixX<double>& Z);

// ---------------------------------------------------------------------------
// Oracle

enum class OracleStatus { kFeasible, kInfeasible, kUnknown };
enum class OracleMethod { kNodeReduction, kLiftedAdmm };

std::string to_string(OracleStatus status);
std::string to_string(OracleMethod method);
OracleMethod oracle_method_from_string(const std::string& s);

struct OracleOptions {
  OracleMethod method = OracleMethod::kNodeReduction;
  int max_iterations = 20000;
  double tol_feas = 1e-6;
  double tol_infeas = 1e-4;
  double tol_res = 1e-7;
  double t_cap = 1.0;      // phase-I slack is bounded below by -t_cap
  double admm_rho = 1.0;   // initial penalty of the lifted ADMM
  bool recover = true;     // run the recovery phase when feasible
  void validate() const;
};

struct OracleResult {
  OracleStatus status = OracleStatus::kUnknown;
  double phase1_slack = 0.0;  // t*
  double max_residual = 0.0;
  int iterations = 0;
  std::optional<std::vector<Position3>> recovered_positions;  // aligned with node_order
  std::optional<double> rank_gap;                             // λ4 / λ3 of Z
  MatrixX<double> lifted;
  std::string message;
};

OracleStatus classify_slack(double t_star, const OracleOptions& options);

OracleResult check_feasibility(const FeasibilityProblem& problem, const OracleOptions& options = {});

}  // namespace sdpguard
