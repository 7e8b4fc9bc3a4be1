#pragma once

#include "ssalab/forecast.hpp"
#include "ssalab/ssa.hpp"
#include "ssalab/subspace.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ssalab {

enum class ShiftMethod { ls, tls };

// r x r matrix D with  basis-without-first-row ~ basis-without-last-row * D.
struct ShiftMatrixEstimate {
  Eigen::MatrixXd matrix;
  ShiftMethod method = ShiftMethod::ls;

  PoleSet poles() const;
};

// LS-ESPRIT. `basis` is any L x r matrix of full column rank (L >= r + 1);
// the eigenvalues of the estimate do not depend on the choice of basis.
ShiftMatrixEstimate esprit_ls(const Eigen::MatrixXd& basis);
ShiftMatrixEstimate esprit_ls(const SubspaceBasis& basis);

// TLS-ESPRIT via the SVD of [B_up | B_down]: Z = -V12 * inv(V22).
ShiftMatrixEstimate esprit_tls(const Eigen::MatrixXd& basis);
ShiftMatrixEstimate esprit_tls(const SubspaceBasis& basis);

struct ParamEstimate {
  double frequency = 0.0;  // cycles per sample, in [0, 0.5]
  double damping = 0.0;    // ln|mu|
  double modulus = 0.0;    // |mu|
};

std::vector<ParamEstimate> poles_to_params(const PoleSet& poles);

// Drops the negative-frequency member of conjugate pairs (keeps Im(mu) >= 0).
PoleSet nonnegative_frequency_poles(const PoleSet& poles);

enum class PseudospectrumMethod { minnorm, music, ev };
std::string_view to_string(PseudospectrumMethod method);

struct Pseudospectrum {
  std::vector<double> grid;    // omega in [0, 0.5], strictly increasing
  std::vector<double> values;  // 1 / f(omega)
  PseudospectrumMethod method = PseudospectrumMethod::minnorm;
};

inline constexpr std::size_t kDefaultGridSize = 2048;

// Uniform grid on [0, 0.5] with both endpoints.
std::vector<double> frequency_grid(std::size_t gridsize);

// Min-Norm: f(omega) = cos^2 of the angle between W(omega) and the min-norm vector.
Pseudospectrum pseudospectrum_minnorm(const SubspaceBasis& signal, std::size_t gridsize = kDefaultGridSize);

// Noise subspace of the trajectory matrix: left singular vectors r+1..L of X and the
// matching eigenvalues of X X^T (squared singular values, zero-padded when L > K).
struct NoiseSubspace {
  SubspaceBasis basis;
  Eigen::VectorXd eigenvalues;
};

NoiseSubspace noise_subspace(const TrajectoryMatrix& x, std::size_t rank);

enum class NoiseWeights { uniform, ev };

// MUSIC alignment f(omega) = sum_j w_j |<W, U_j>|^2 / |W|^2 with w_j = 1 (uniform) or 1/lambda_j (ev).
double music_alignment(const SubspaceBasis& noise, double omega, NoiseWeights weights = NoiseWeights::uniform,
                       std::span<const double> eigenvalues = {});

Pseudospectrum pseudospectrum_music(const SubspaceBasis& noise, std::size_t gridsize = kDefaultGridSize,
                                    NoiseWeights weights = NoiseWeights::uniform,
                                    std::span<const double> eigenvalues = {});

// Picks the `count` roots closest to the unit circle; ties go to larger modulus,
// then smaller frequency.
PoleSet closest_to_unit_circle(const std::vector<std::complex<double>>& roots, std::size_t count);

// Root-MUSIC: roots of Z(1/z)^T U U^* Z(z); one root of each reciprocal pair is
// kept and the `rank` closest to the unit circle are returned.
PoleSet root_music(const SubspaceBasis& noise, std::size_t rank);

// Root-Min-Norm: the `rank` characteristic roots closest to the unit circle.
PoleSet root_min_norm(const LinearRecurrence& lrf, std::size_t rank);

// Pooled characteristic roots of the recurrences defined by each complement
// vector with a nonzero last coordinate. No clustering is attempted.
PoleSet pooled_complement_roots(const SubspaceBasis& noise);

// Largest `count` interior local maxima, refined by a parabola through the
// log-values, returned in ascending order.
std::vector<double> find_peaks(const Pseudospectrum& ps, std::size_t count);

}  // namespace ssalab
