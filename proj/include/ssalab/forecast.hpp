#pragma once

#include "ssalab/series.hpp"
#include "ssalab/subspace.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ssalab {

enum class PredictionDirection { forward, backward };

// Linear recurrent formula. coeffs[k-1] holds a_k, the weight of the value k
// steps away: forward  f_n = sum_k a_k f_{n-k};  backward f_n = sum_k a_k f_{n+k}.
struct LinearRecurrence {
  Eigen::VectorXd coeffs;
  PredictionDirection direction = PredictionDirection::forward;
  double nu2 = 0.0;

  Eigen::Index order() const noexcept { return coeffs.size(); }

  // Vector of the orthogonal complement defining the recurrence: forward
  // (a_{L-1}, ..., a_1, -1), backward (-1, a_1, ..., a_{L-1}).
  Eigen::VectorXd prediction_vector() const;
};

// Complex roots; multiplicities empty means every pole is simple.
struct PoleSet {
  std::vector<std::complex<double>> poles;
  std::vector<int> multiplicities;

  std::size_t size() const noexcept { return poles.size(); }
  int multiplicity(std::size_t i) const { return multiplicities.empty() ? 1 : multiplicities[i]; }
};

// One summand (sum_j c_j n^j) mu^n of the explicit signal form.
struct SignalTerm {
  std::complex<double> pole;
  std::vector<std::complex<double>> coefficients;
};

struct SignalModel {
  std::vector<SignalTerm> terms;
  double residual_rms = 0.0;

  std::complex<double> value_at(std::size_t n) const;
  Eigen::VectorXd evaluate(std::size_t count) const;  // real parts for n = 0..count-1
};

struct ForecastOptions {
  double divergence_bound = 1e100;
};

// Min-norm recurrence from an orthonormal signal basis. Throws vertical-subspace
// when nu^2 >= 1 - epsilon.
LinearRecurrence min_norm_lrf(const SubspaceBasis& basis,
                              PredictionDirection direction = PredictionDirection::forward,
                              double epsilon = 1e-10);

// Applies a forward recurrence to `seed` (oldest first) and returns `steps` new values.
TimeSeries recurrent_forecast(std::span<const double> seed, const LinearRecurrence& lrf, std::size_t steps,
                              const ForecastOptions& options = {});

// Roots of mu^n + c_1 mu^{n-1} + ... + c_n, given c_1..c_n, as companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& monic_tail);

// Roots of mu^t - sum_k a_k mu^{t-k}, where t is the index of the last nonzero coefficient.
PoleSet characteristic_roots(const LinearRecurrence& lrf);

// Merges poles closer than `tolerance` and records their multiplicities.
PoleSet merge_close_poles(const PoleSet& poles, double tolerance = 1e-8);

// Least-squares fit of s_n = sum_m (sum_j c_mj n^j) mu_m^n over n = 0..N-1.
// Throws ill-conditioned-basis when the column-equilibrated basis has condition number > 1e12.
SignalModel fit_signal_model(const TimeSeries& series, const PoleSet& poles);

// z' = conj(z) / |z|^2, relating forward and backward signal roots.
std::complex<double> forward_backward_root_pair(std::complex<double> z);

struct SsaForecastSettings {
  Eigen::Index reconstruction_window = 0;  // L_rec
  Eigen::Index lrf_window = 0;             // L_lrf
  std::size_t rank = 0;
  std::size_t steps = 1;
  DecompositionMethod method = DecompositionMethod::basic;
};

// Recurrent SSA forecast: reconstruct with L_rec, estimate the min-norm LRF
// with L_lrf, continue the reconstructed tail.
TimeSeries ssa_forecast(const TimeSeries& series, const SsaForecastSettings& settings,
                        const ForecastOptions& options = {});

}  // namespace ssalab
