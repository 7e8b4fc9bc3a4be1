#pragma once

#include "ssalab/ssa.hpp"

#include <Eigen/Core>

namespace ssalab {

// L x r matrix with orthonormal columns, 1 <= r < L.
class SubspaceBasis {
public:
  // Throws invalid-argument if the columns are not orthonormal within `tolerance`.
  explicit SubspaceBasis(Eigen::MatrixXd columns, double tolerance = 1e-10);

  const Eigen::MatrixXd& matrix() const noexcept { return columns_; }
  Eigen::Index ambient_dimension() const noexcept { return columns_.rows(); }
  Eigen::Index rank() const noexcept { return columns_.cols(); }

private:
  Eigen::MatrixXd columns_;
};

// Symmetric idempotent L x L matrix.
class Projector {
public:
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

private:
  friend Projector projector(const SubspaceBasis&);
  explicit Projector(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
  Eigen::MatrixXd matrix_;
};

inline constexpr Eigen::Index kMaxProjectorDimension = 4096;

// Basis of the r leading left singular vectors.
SubspaceBasis signal_basis(const EigentripleSet& ets, std::size_t rank);

// P = B B^T. Refuses L > kMaxProjectorDimension.
Projector projector(const SubspaceBasis& basis);

// Orthonormal basis of the orthogonal complement (L - r columns).
SubspaceBasis orthogonal_complement(const SubspaceBasis& basis);

// Sine of the largest principal angle, i.e. |P_A - P_B|_2, in [0, 1].
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);

}  // namespace ssalab
