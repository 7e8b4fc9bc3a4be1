#include "oracles.hpp"

#include "ssalab/error.hpp"
#include "ssalab/subspace.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ssalab;

namespace {

SubspaceBasis col(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return SubspaceBasis(Eigen::MatrixXd(x.normalized()));
}

}  // namespace

TEST(SubspaceBasis, ValidatesShapeAndOrthonormality) {
  EXPECT_THROW(SubspaceBasis(Eigen::MatrixXd::Identity(3, 3)), Error);
  EXPECT_THROW(SubspaceBasis(Eigen::MatrixXd::Ones(3, 1)), Error);
  EXPECT_THROW(SubspaceBasis(Eigen::MatrixXd(3, 0)), Error);
  EXPECT_NO_THROW(SubspaceBasis(Eigen::MatrixXd::Identity(3, 2)));
}

TEST(SignalBasis, ConstantSeries) {
  const auto b = signal_basis(decompose(embed(TimeSeries{1, 1, 1, 1, 1}, 2)), 1);
  EXPECT_TRUE(b.matrix().isApprox(Eigen::Vector2d::Constant(1.0 / std::sqrt(2.0)), 1e-12));
}

TEST(SignalBasis, SinusoidMatchesTrajectorySpace) {
  const Eigen::VectorXd f = oracle::cosine(80, 0.1, 1.0, 0.3);
  const auto b = signal_basis(decompose(embed(TimeSeries(f), 30)), 2);
  // Oracle: the trajectory space is spanned by the first two lagged vectors.
  Eigen::MatrixXd x = oracle::hankel(f, 30).leftCols(2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(30, 2);
  EXPECT_LE(subspace_distance(b, SubspaceBasis(q)), 1e-8);
}

TEST(SignalBasis, RankTooLarge) {
  const auto ets = decompose(embed(TimeSeries(oracle::cosine(40, 0.1)), 20));
  try {
    signal_basis(ets, ets.size() + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::rank_too_large);
  }
}

TEST(Projector, Examples) {
  EXPECT_EQ(projector(SubspaceBasis(Eigen::MatrixXd::Identity(2, 1))).matrix(),
            (Eigen::Matrix2d() << 1, 0, 0, 0).finished());
  const Eigen::MatrixXd p = projector(SubspaceBasis(Eigen::MatrixXd::Identity(4, 2))).matrix();
  EXPECT_EQ(p, (Eigen::Vector4d(1, 1, 0, 0)).asDiagonal().toDenseMatrix());
}

TEST(Projector, SymmetricIdempotentTrace) {
  std::mt19937_64 gen(1);
  for (int r = 1; r < 6; ++r) {
    const SubspaceBasis b(oracle::random_orthonormal(9, r, gen));
    const Eigen::MatrixXd p = projector(b).matrix();
    EXPECT_LE((p - p.transpose()).norm(), 1e-10);
    EXPECT_LE((p * p - p).norm(), 1e-8);
    EXPECT_NEAR(p.trace(), r, 1e-10);
  }
}

TEST(OrthogonalComplement, SpansTheRest) {
  std::mt19937_64 gen(2);
  const SubspaceBasis b(oracle::random_orthonormal(7, 3, gen));
  const SubspaceBasis c = orthogonal_complement(b);
  EXPECT_EQ(c.rank(), 4);
  EXPECT_LE((b.matrix().transpose() * c.matrix()).norm(), 1e-12);
}

TEST(SubspaceDistance, Examples) {
  const auto a = col({1, 0});
  EXPECT_NEAR(subspace_distance(a, a), 0.0, 1e-15);
  EXPECT_NEAR(subspace_distance(a, col({1, 1})), std::sqrt(0.5), 1e-10);
  try {
    subspace_distance(a, col({1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(SubspaceDistance, AgreesWithExplicitProjectorDifference) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index l = 3 + trial % 6;
    const Eigen::Index r = 1 + trial % (l - 1);
    const SubspaceBasis a(oracle::random_orthonormal(l, r, gen));
    const SubspaceBasis b(oracle::random_orthonormal(l, r, gen));
    const double d = subspace_distance(a, b);
    EXPECT_NEAR(d, oracle::projector_difference_norm(a.matrix(), b.matrix()), 1e-8);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    EXPECT_NEAR(d, subspace_distance(b, a), 1e-12);
  }
}

TEST(SubspaceDistance, RotationInvariance) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const SubspaceBasis a(oracle::random_orthonormal(12, 3, gen));
    const SubspaceBasis b(oracle::random_orthonormal(12, 3, gen));
    const Eigen::MatrixXd q = oracle::random_orthonormal(3, 3, gen);
    EXPECT_NEAR(subspace_distance(SubspaceBasis(a.matrix() * q), b), subspace_distance(a, b), 1e-10);
  }
}

TEST(SubspaceDistance, NearlyCoincidentKeepsRelativeAccuracy) {
  // Tilt by a known tiny angle.
  const double t = 1e-11;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 1);
  a(0, 0) = 1.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 1);
  b(0, 0) = std::cos(t);
  b(1, 0) = std::sin(t);
  EXPECT_NEAR(subspace_distance(SubspaceBasis(a), SubspaceBasis(b)), std::sin(t), 1e-20);
}
