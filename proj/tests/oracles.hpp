#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline Eigen::VectorXd cosine(std::size_t n, double freq, double modulus = 1.0, double phase = 0.0) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto x = static_cast<double>(i);
    v[i] = std::pow(modulus, x) * std::cos(2.0 * std::numbers::pi * freq * x + phase);
  }
  return v;
}

inline Eigen::VectorXd geometric(std::size_t n, double base, double scale = 1.0) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = scale * std::pow(base, static_cast<double>(i));
  return v;
}

// Dense Hankel matrix built element by element.
inline Eigen::MatrixXd hankel(const Eigen::VectorXd& f, Eigen::Index l) {
  const Eigen::Index k = f.size() - l + 1;
  Eigen::MatrixXd x(l, k);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < k; ++j) x(i, j) = f[i + j];
  return x;
}

// |P_A - P_B|_2 via the symmetric eigendecomposition of the explicit difference.
inline double projector_difference_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd d = a * a.transpose() - b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// Roots of z^2 + p z + q.
inline std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double p, double q) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(p * p - 4.0 * q, 0.0));
  return {(-p + disc) / 2.0, (-p - disc) / 2.0};
}

inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return m;
}

// Brute-force evaluation of |<W(omega), a>|^2 / (|W|^2 |a|^2) on a dense grid.
inline std::vector<double> dense_alignment(const Eigen::VectorXd& a, std::size_t points) {
  std::vector<double> out(points);
  const auto l = static_cast<double>(a.size());
  for (std::size_t k = 0; k < points; ++k) {
    const double w = 0.5 * static_cast<double>(k) / static_cast<double>(points - 1);
    std::complex<double> s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) s += std::polar(1.0, -2.0 * std::numbers::pi * w * j) * a[j];
    out[k] = std::norm(s) / (l * a.squaredNorm());
  }
  return out;
}

// Exact first-order variance of the rank-1 reconstruction of a constant series
// in unit white noise at point `l`: the perturbation of the reconstructed matrix
// is P_u E + E P_v - P_u E P_v with u, v constant unit vectors, diagonally averaged.
inline double first_order_variance(Eigen::Index n, Eigen::Index window, Eigen::Index l) {
  const Eigen::Index k = n - window + 1;
  const double lu = static_cast<double>(window);
  const double kv = static_cast<double>(k);
  // Coefficient of e_m in the first-order error at point l.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < window; ++i) {
    const Eigen::Index j = l - i;
    if (j < 0 || j >= k) continue;
    ++count;
    // (P_u E)_{ij} = (1/L) sum_p E_{pj}; (E P_v)_{ij} = (1/K) sum_q E_{iq};
    // (P_u E P_v)_{ij} = (1/(LK)) sum_{p,q} E_{pq}; E_{pq} = e_{p+q}.
    for (Eigen::Index p = 0; p < window; ++p) w[p + j] += 1.0 / lu;
    for (Eigen::Index q = 0; q < k; ++q) w[i + q] += 1.0 / kv;
  }
  // The P_u E P_v term does not depend on (i, j).
  for (Eigen::Index p = 0; p < window; ++p)
    for (Eigen::Index q = 0; q < k; ++q) w[p + q] -= static_cast<double>(count) / (lu * kv);
  w /= static_cast<double>(count);
  return w.squaredNorm();
}

}  // namespace oracle
