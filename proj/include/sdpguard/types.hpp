#pragma once

#include <set>

#include <Eigen/Core>

namespace sdpguard {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Matrix3X = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

using Position3 = Vector3<double>;

// UAV ids are dense indices 0..N-1. Ordered sets keep every iteration order
// (and therefore every RNG draw) deterministic.
using IdSet = std::set<int>;

}  // namespace sdpguard
