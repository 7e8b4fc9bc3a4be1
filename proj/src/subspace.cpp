#include "ssalab/subspace.hpp"

#include "ssalab/error.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace ssalab {

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd columns, double tolerance) : columns_(std::move(columns)) {
  const Eigen::Index l = columns_.rows();
  const Eigen::Index r = columns_.cols();
  if (r < 1 || r >= l) {
    throw Error(ErrorCode::invalid_argument,
                "subspace rank r=" + std::to_string(r) + " must satisfy 1 <= r < L=" + std::to_string(l));
  }
  const Eigen::MatrixXd gram = columns_.transpose() * columns_;
  const double err = (gram - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
  if (!(err <= tolerance)) {
    throw Error(ErrorCode::invalid_argument, "basis columns are not orthonormal (max |B^T B - I| = " +
                                                 std::to_string(err) + ")");
  }
}

SubspaceBasis signal_basis(const EigentripleSet& ets, std::size_t rank) {
  if (rank == 0) throw Error(ErrorCode::invalid_argument, "signal rank must be at least 1");
  if (rank > ets.size()) {
    throw Error(ErrorCode::rank_too_large, "rank " + std::to_string(rank) + " exceeds the " +
                                               std::to_string(ets.size()) + " retained eigentriples");
  }
  return SubspaceBasis(ets.left_vectors(rank));
}

Projector projector(const SubspaceBasis& basis) {
  if (basis.ambient_dimension() > kMaxProjectorDimension) {
    throw Error(ErrorCode::invalid_argument, "projector would be " + std::to_string(basis.ambient_dimension()) +
                                                 " square; use subspace_distance directly");
  }
  Eigen::MatrixXd p = basis.matrix() * basis.matrix().transpose();
  return Projector(0.5 * (p + p.transpose()));
}

SubspaceBasis orthogonal_complement(const SubspaceBasis& basis) {
  const Eigen::Index l = basis.ambient_dimension();
  const Eigen::Index r = basis.rank();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.matrix());
  const Eigen::MatrixXd q = qr.householderQ();
  return SubspaceBasis(q.rightCols(l - r));
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dimension() != b.ambient_dimension() || a.rank() != b.rank()) {
    throw Error(ErrorCode::dimension_mismatch, "subspaces must share L and r");
  }
  // sigma_max((I - A A^T) B) equals sqrt(1 - sigma_min(A^T B)^2) and keeps full
  // relative accuracy for nearly coincident subspaces.
  const Eigen::MatrixXd residual = b.matrix() - a.matrix() * (a.matrix().transpose() * b.matrix());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return std::clamp(svd.singularValues()[0], 0.0, 1.0);
}

}  // namespace ssalab
