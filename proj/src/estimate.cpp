#include "ssalab/estimate.hpp"

#include "ssalab/error.hpp"

#include "detail/svd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

namespace ssalab {

using cd = std::complex<double>;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFloor = 1e-300;

void check_shift_basis(const Eigen::MatrixXd& basis) {
  if (basis.cols() < 1) throw Error(ErrorCode::invalid_argument, "basis has no columns");
  if (basis.rows() < basis.cols() + 1) {
    throw Error(ErrorCode::invalid_argument, "shift estimation needs L >= r + 1");
  }
}

double frequency_of(cd z) { return std::abs(std::arg(z)) / kTwoPi; }

}  // namespace

PoleSet ShiftMatrixEstimate::poles() const {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(matrix, false);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::decomposition_failed, "eigenvalues of the shift matrix did not converge");
  }
  const Eigen::VectorXcd v = eig.eigenvalues();
  return PoleSet{{v.data(), v.data() + v.size()}, {}};
}

ShiftMatrixEstimate esprit_ls(const Eigen::MatrixXd& basis) {
  check_shift_basis(basis);
  const Eigen::Index l = basis.rows();
  const Eigen::Index r = basis.cols();
  const Eigen::MatrixXd upper = basis.topRows(l - 1);
  const Eigen::MatrixXd lower = basis.bottomRows(l - 1);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(upper);
  qr.setThreshold(1e-12);
  if (qr.rank() < r) {
    throw Error(ErrorCode::rank_deficient_shift, "basis without its last row has rank " +
                                                     std::to_string(qr.rank()) + " < r=" + std::to_string(r));
  }
  return {qr.solve(lower), ShiftMethod::ls};
}

ShiftMatrixEstimate esprit_ls(const SubspaceBasis& basis) { return esprit_ls(basis.matrix()); }

ShiftMatrixEstimate esprit_tls(const Eigen::MatrixXd& basis) {
  check_shift_basis(basis);
  const Eigen::Index l = basis.rows();
  const Eigen::Index r = basis.cols();
  Eigen::MatrixXd stacked(l - 1, 2 * r);
  stacked << basis.topRows(l - 1), basis.bottomRows(l - 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::MatrixXd v12 = v.block(0, r, r, r);
  const Eigen::MatrixXd v22 = v.block(r, r, r, r);
  Eigen::JacobiSVD<Eigen::MatrixXd> check(v22);
  const auto& s = check.singularValues();
  if (!(s[r - 1] > 1e-12 * std::max(1.0, s[0]))) {
    throw Error(ErrorCode::tls_degenerate, "V22 block of the TLS problem is singular");
  }
  return {-v12 * v22.inverse(), ShiftMethod::tls};
}

ShiftMatrixEstimate esprit_tls(const SubspaceBasis& basis) { return esprit_tls(basis.matrix()); }

std::vector<ParamEstimate> poles_to_params(const PoleSet& poles) {
  std::vector<ParamEstimate> out;
  out.reserve(poles.size());
  for (const cd& mu : poles.poles) {
    const double modulus = std::abs(mu);
    if (modulus == 0.0) throw Error(ErrorCode::zero_input, "pole at the origin has no frequency or damping");
    out.push_back({frequency_of(mu), std::log(modulus), modulus});
  }
  return out;
}

PoleSet nonnegative_frequency_poles(const PoleSet& poles) {
  PoleSet out;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (poles.poles[i].imag() >= 0.0) {
      out.poles.push_back(poles.poles[i]);
      if (!poles.multiplicities.empty()) out.multiplicities.push_back(poles.multiplicities[i]);
    }
  }
  return out;
}

std::string_view to_string(PseudospectrumMethod method) {
  switch (method) {
    case PseudospectrumMethod::minnorm: return "minnorm";
    case PseudospectrumMethod::music: return "music";
    case PseudospectrumMethod::ev: return "ev";
  }
  return "unknown";
}

std::vector<double> frequency_grid(std::size_t gridsize) {
  if (gridsize < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least 2 points");
  std::vector<double> grid(gridsize);
  for (std::size_t k = 0; k < gridsize; ++k) grid[k] = 0.5 * static_cast<double>(k) / static_cast<double>(gridsize - 1);
  return grid;
}

namespace {

// W(omega)^H M for each column of M, i.e. sum_j e^{-2 pi i omega j} M(j, c).
Eigen::RowVectorXcd steering_products(const Eigen::MatrixXd& m, double omega) {
  const Eigen::Index l = m.rows();
  Eigen::RowVectorXcd w(l);
  for (Eigen::Index j = 0; j < l; ++j) w[j] = std::polar(1.0, -kTwoPi * omega * static_cast<double>(j));
  return w * m.cast<cd>();
}

}  // namespace

Pseudospectrum pseudospectrum_minnorm(const SubspaceBasis& signal, std::size_t gridsize) {
  const Eigen::Index l = signal.ambient_dimension();
  const Eigen::MatrixXd& b = signal.matrix();
  const Eigen::VectorXd pi = b.row(l - 1).transpose();
  if (!(pi.squaredNorm() < 1.0 - 1e-10)) {
    throw Error(ErrorCode::vertical_subspace, "e_L lies in the signal subspace; min-norm vector undefined");
  }
  // A = P_perp e_L
  Eigen::MatrixXd a = -b * pi;
  a(l - 1, 0) += 1.0;
  const double a2 = a.squaredNorm();

  Pseudospectrum ps;
  ps.method = PseudospectrumMethod::minnorm;
  ps.grid = frequency_grid(gridsize);
  ps.values.resize(gridsize);
  for (std::size_t k = 0; k < gridsize; ++k) {
    const double f = std::norm(steering_products(a, ps.grid[k])[0]) / (static_cast<double>(l) * a2);
    ps.values[k] = 1.0 / std::max(f, kFloor);
  }
  return ps;
}

NoiseSubspace noise_subspace(const TrajectoryMatrix& x, std::size_t rank) {
  const Eigen::Index l = x.window();
  if (rank < 1 || static_cast<Eigen::Index>(rank) >= l) {
    throw Error(ErrorCode::empty_noise_basis, "rank " + std::to_string(rank) + " leaves no noise subspace for L=" +
                                                  std::to_string(l));
  }
  // SVD of X rather than an eigendecomposition of XX^T, which would square the conditioning.
  const auto svd = detail::robust_svd(x.matrix(), Eigen::ComputeFullU);
  if (!svd.ok) throw Error(ErrorCode::decomposition_failed, "SVD of the trajectory matrix failed");
  const Eigen::Index count = l - static_cast<Eigen::Index>(rank);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(l);
  lambda.head(svd.s.size()) = svd.s.cwiseAbs2();
  Eigen::MatrixXd basis = svd.u.rightCols(count);
  Eigen::VectorXd values = lambda.tail(count);
  return {SubspaceBasis(std::move(basis)), std::move(values)};
}

double music_alignment(const SubspaceBasis& noise, double omega, NoiseWeights weights,
                       std::span<const double> eigenvalues) {
  const Eigen::Index count = noise.rank();
  if (weights == NoiseWeights::ev) {
    if (static_cast<Eigen::Index>(eigenvalues.size()) != count) {
      throw Error(ErrorCode::dimension_mismatch, "ev weighting needs one eigenvalue per noise vector");
    }
    for (double lambda : eigenvalues) {
      if (!(lambda > 0.0)) throw Error(ErrorCode::nonpositive_eigenvalue, "ev weighting needs positive eigenvalues");
    }
  }
  const Eigen::RowVectorXcd p = steering_products(noise.matrix(), omega);
  double f = 0.0;
  for (Eigen::Index j = 0; j < count; ++j) {
    const double term = std::norm(p[j]);
    f += weights == NoiseWeights::ev ? term / eigenvalues[static_cast<std::size_t>(j)] : term;
  }
  return f / static_cast<double>(noise.ambient_dimension());
}

Pseudospectrum pseudospectrum_music(const SubspaceBasis& noise, std::size_t gridsize, NoiseWeights weights,
                                    std::span<const double> eigenvalues) {
  Pseudospectrum ps;
  ps.method = weights == NoiseWeights::ev ? PseudospectrumMethod::ev : PseudospectrumMethod::music;
  ps.grid = frequency_grid(gridsize);
  ps.values.resize(gridsize);
  for (std::size_t k = 0; k < gridsize; ++k) {
    ps.values[k] = 1.0 / std::max(music_alignment(noise, ps.grid[k], weights, eigenvalues), kFloor);
  }
  return ps;
}

PoleSet closest_to_unit_circle(const std::vector<cd>& roots, std::size_t count) {
  if (count > roots.size()) {
    throw Error(ErrorCode::rank_too_large, "requested " + std::to_string(count) + " roots but only " +
                                               std::to_string(roots.size()) + " are available");
  }
  std::vector<cd> sorted = roots;
  std::stable_sort(sorted.begin(), sorted.end(), [](cd a, cd b) {
    const auto key = [](cd z) {
      const double m = std::abs(z);
      return std::make_tuple(std::abs(1.0 - m), -m, frequency_of(z), -z.imag());
    };
    return key(a) < key(b);
  });
  sorted.resize(count);
  return PoleSet{std::move(sorted), {}};
}

PoleSet root_music(const SubspaceBasis& noise, std::size_t rank) {
  const Eigen::Index l = noise.ambient_dimension();
  const Eigen::MatrixXd p = noise.matrix() * noise.matrix().transpose();
  // Coefficient of z^{d + L - 1} is the sum of the d-th diagonal of U U^T.
  Eigen::VectorXd desc(2 * l - 1);  // highest power first
  for (Eigen::Index d = -(l - 1); d <= l - 1; ++d) {
    const double c = p.diagonal(d).sum();
    desc[(l - 1) - d] = c;
  }
  // Exact self-reciprocity.
  desc = 0.5 * (desc + desc.reverse()).eval();
  const double scale = desc.cwiseAbs().maxCoeff();
  Eigen::Index first = 0;
  Eigen::Index last = desc.size() - 1;
  while (first < last && std::abs(desc[first]) <= 1e-14 * scale) ++first;
  while (last > first && std::abs(desc[last]) <= 1e-14 * scale) --last;
  const Eigen::VectorXd poly = desc.segment(first, last - first + 1);
  std::vector<cd> roots = polynomial_roots(poly.tail(poly.size() - 1) / poly[0]);

  // Roots come in pairs (z, 1/conj z); the smaller-modulus half is the |z| <= 1 member of each pair.
  std::stable_sort(roots.begin(), roots.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
  roots.resize(roots.size() / 2);
  if (roots.size() < rank) {
    throw Error(ErrorCode::too_few_roots_inside, "only " + std::to_string(roots.size()) +
                                                     " roots inside the unit circle, need " + std::to_string(rank));
  }
  return closest_to_unit_circle(roots, rank);
}

PoleSet root_min_norm(const LinearRecurrence& lrf, std::size_t rank) {
  const PoleSet all = characteristic_roots(lrf);
  return closest_to_unit_circle(all.poles, rank);
}

PoleSet pooled_complement_roots(const SubspaceBasis& noise) {
  const Eigen::MatrixXd& u = noise.matrix();
  const Eigen::Index l = u.rows();
  PoleSet pooled;
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const double last = u(l - 1, c);
    if (std::abs(last) < 1e-12) continue;
    LinearRecurrence lrf;
    lrf.coeffs = (-u.col(c).head(l - 1) / last).reverse();
    try {
      const PoleSet roots = characteristic_roots(lrf);
      pooled.poles.insert(pooled.poles.end(), roots.poles.begin(), roots.poles.end());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::all_zero_coefficients) throw;
    }
  }
  return pooled;
}

std::vector<double> find_peaks(const Pseudospectrum& ps, std::size_t count) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "peak count must be at least 1");
  const std::size_t n = ps.values.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (ps.values[i] > ps.values[i - 1] && ps.values[i] >= ps.values[i + 1]) peaks.push_back(i);
  }
  if (peaks.size() < count) {
    throw Error(ErrorCode::fewer_peaks_than_requested, "found " + std::to_string(peaks.size()) +
                                                           " interior peaks, requested " + std::to_string(count));
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return ps.values[a] > ps.values[b]; });
  peaks.resize(count);

  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i : peaks) {
    const double ym = std::log(ps.values[i - 1]);
    const double y0 = std::log(ps.values[i]);
    const double yp = std::log(ps.values[i + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    double delta = denom < 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    const double step = 0.5 * (ps.grid[i + 1] - ps.grid[i - 1]);
    out.push_back(ps.grid[i] + delta * step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ssalab
