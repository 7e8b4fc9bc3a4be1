#include "ssalab/error.hpp"
#include "ssalab/ssa.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <random>

namespace ssalab {

namespace {

constexpr Eigen::Index kOversample = 6;
constexpr Eigen::Index kDenseThreshold = 64;
constexpr int kMaxIterations = 80;
constexpr double kResidualTolerance = 1e-13;

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

EigentripleSet truncate(EigentripleSet full, std::size_t count) {
  if (full.triples.size() > count) full.triples.resize(count);
  return full;
}

}  // namespace

EigentripleSet decompose_leading(const TimeSeries& series, Eigen::Index window, std::size_t count,
                                 const DecomposeOptions& options) {
  const TrajectoryMatrix traj = embed(series, window);
  const Eigen::MatrixXd& x = traj.matrix();
  const Eigen::Index m = std::min(x.rows(), x.cols());
  const Eigen::Index want = static_cast<Eigen::Index>(count);
  const Eigen::Index block = want + kOversample;
  if (m <= kDenseThreshold || 2 * block >= m) return truncate(decompose(traj, options), count);

  // Fixed start block keeps results reproducible.
  std::mt19937_64 gen(0x5eed5eedULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd omega(x.cols(), block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < x.cols(); ++i) omega(i, j) = uni(gen);

  Eigen::MatrixXd q = orthonormalize(x * omega);
  for (int it = 0; it < kMaxIterations; ++it) {
    q = orthonormalize(x * orthonormalize(x.transpose() * q));

    // Rayleigh-Ritz on the captured range.
    const Eigen::MatrixXd b = q.transpose() * x;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    if (!(s[0] > 0.0)) return truncate(decompose(traj, options), count);
    const Eigen::MatrixXd u = q * svd.matrixU().leftCols(want);
    const Eigen::MatrixXd v = svd.matrixV().leftCols(want);
    const Eigen::MatrixXd residual = x * v - u * s.head(want).asDiagonal();
    const double worst = residual.colwise().norm().maxCoeff();
    if (worst > kResidualTolerance * s[0]) continue;

    EigentripleSet out;
    out.method = DecompositionMethod::basic;
    out.window = x.rows();
    out.columns = x.cols();
    const double cutoff = options.relative_cutoff * s[0];
    for (Eigen::Index i = 0; i < want && s[i] > cutoff; ++i) {
      Eigentriple t{s[i], u.col(i), v.col(i)};
      normalize_sign(t.u, t.v);
      out.triples.push_back(std::move(t));
    }
    return out;
  }
  return truncate(decompose(traj, options), count);
}

}  // namespace ssalab
