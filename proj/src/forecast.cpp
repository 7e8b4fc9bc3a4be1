#include "ssalab/forecast.hpp"

#include "ssalab/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ssalab {

using cd = std::complex<double>;

Eigen::VectorXd LinearRecurrence::prediction_vector() const {
  const Eigen::Index n = coeffs.size();
  Eigen::VectorXd a(n + 1);
  if (direction == PredictionDirection::forward) {
    a.head(n) = coeffs.reverse();
    a[n] = -1.0;
  } else {
    a[0] = -1.0;
    a.tail(n) = coeffs;
  }
  return a;
}

cd SignalModel::value_at(std::size_t n) const {
  cd total = 0.0;
  for (const auto& term : terms) {
    // mu^n by repeated squaring keeps 0^0 = 1.
    cd power = 1.0;
    cd base = term.pole;
    for (std::size_t e = n; e > 0; e >>= 1) {
      if (e & 1U) power *= base;
      base *= base;
    }
    cd poly = 0.0;
    double nj = 1.0;
    for (const auto& c : term.coefficients) {
      poly += c * nj;
      nj *= static_cast<double>(n);
    }
    total += poly * power;
  }
  return total;
}

Eigen::VectorXd SignalModel::evaluate(std::size_t count) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < count; ++n) out[static_cast<Eigen::Index>(n)] = value_at(n).real();
  return out;
}

LinearRecurrence min_norm_lrf(const SubspaceBasis& basis, PredictionDirection direction, double epsilon) {
  const Eigen::MatrixXd& b = basis.matrix();
  const Eigen::Index l = b.rows();
  const Eigen::VectorXd pi = direction == PredictionDirection::forward ? Eigen::VectorXd(b.row(l - 1).transpose())
                                                                       : Eigen::VectorXd(b.row(0).transpose());
  const double nu2 = pi.squaredNorm();
  if (!(nu2 < 1.0 - epsilon)) {
    throw Error(ErrorCode::vertical_subspace,
                "nu^2 = " + std::to_string(nu2) + " is not below 1 - epsilon; the min-norm recurrence is undefined");
  }
  const Eigen::VectorXd bpi = b * pi / (1.0 - nu2);
  LinearRecurrence lrf;
  lrf.direction = direction;
  lrf.nu2 = nu2;
  lrf.coeffs = direction == PredictionDirection::forward ? Eigen::VectorXd(bpi.head(l - 1).reverse())
                                                         : Eigen::VectorXd(bpi.tail(l - 1));
  return lrf;
}

TimeSeries recurrent_forecast(std::span<const double> seed, const LinearRecurrence& lrf, std::size_t steps,
                              const ForecastOptions& options) {
  if (lrf.direction != PredictionDirection::forward) {
    throw Error(ErrorCode::invalid_argument, "recurrent forecasting needs a forward recurrence");
  }
  const auto order = static_cast<std::size_t>(lrf.order());
  if (seed.size() != order) {
    throw Error(ErrorCode::invalid_argument, "seed length " + std::to_string(seed.size()) +
                                                 " must equal the recurrence order " + std::to_string(order));
  }
  if (steps == 0) throw Error(ErrorCode::invalid_argument, "forecast horizon must be at least 1");

  std::vector<double> history(seed.begin(), seed.end());
  history.reserve(order + steps);
  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t n = history.size();
    double next = 0.0;
    for (std::size_t k = 1; k <= order; ++k) next += lrf.coeffs[static_cast<Eigen::Index>(k - 1)] * history[n - k];
    if (!std::isfinite(next) || std::abs(next) > options.divergence_bound) {
      throw Error(ErrorCode::forecast_diverged, "forecast value at step " + std::to_string(step + 1) +
                                                    " exceeds the divergence bound");
    }
    history.push_back(next);
  }
  return TimeSeries(std::span<const double>(history.data() + order, steps));
}

namespace {

// Parlett-Reinsch balancing by powers of two.
void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double kGamma = 0.95;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = a.col(i).cwiseAbs().sum() - std::abs(a(i, i));
      const double row = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
      if (col == 0.0 || row == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double f = std::ldexp(1.0, exponent);
      if (col * f + row / f < kGamma * (col + row)) {
        a.col(i) *= f;
        a.row(i) /= f;
        changed = true;
      }
    }
  }
}

}  // namespace

std::vector<cd> polynomial_roots(const Eigen::VectorXd& monic_tail) {
  const Eigen::Index n = monic_tail.size();
  if (n == 0) return {};
  if (n == 1) return {cd(-monic_tail[0], 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  companion.diagonal(-1).setOnes();
  companion.col(n - 1) = -monic_tail.reverse();
  balance(companion);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::decomposition_failed, "companion matrix eigenvalues did not converge");
  }
  const Eigen::VectorXcd values = eig.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

PoleSet characteristic_roots(const LinearRecurrence& lrf) {
  Eigen::Index t = lrf.order();
  while (t > 0 && lrf.coeffs[t - 1] == 0.0) --t;
  if (t == 0) throw Error(ErrorCode::all_zero_coefficients, "recurrence has no nonzero coefficient");
  return PoleSet{polynomial_roots(-lrf.coeffs.head(t)), {}};
}

PoleSet merge_close_poles(const PoleSet& poles, double tolerance) {
  PoleSet out;
  std::vector<bool> used(poles.size(), false);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (used[i]) continue;
    cd sum = poles.poles[i] * static_cast<double>(poles.multiplicity(i));
    int mult = poles.multiplicity(i);
    used[i] = true;
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (!used[j] && std::abs(poles.poles[j] - poles.poles[i]) < tolerance) {
        used[j] = true;
        sum += poles.poles[j] * static_cast<double>(poles.multiplicity(j));
        mult += poles.multiplicity(j);
      }
    }
    out.poles.push_back(sum / static_cast<double>(mult));
    out.multiplicities.push_back(mult);
  }
  return out;
}

SignalModel fit_signal_model(const TimeSeries& series, const PoleSet& poles) {
  const PoleSet merged = merge_close_poles(poles);
  const auto n = static_cast<Eigen::Index>(series.size());
  Eigen::Index p = 0;
  for (std::size_t m = 0; m < merged.size(); ++m) p += merged.multiplicity(m);
  if (p == 0) throw Error(ErrorCode::invalid_argument, "no poles to fit");
  if (p > n) {
    throw Error(ErrorCode::invalid_argument, "model has " + std::to_string(p) + " basis functions but only " +
                                                 std::to_string(n) + " observations");
  }
  for (const auto& mu : merged.poles) {
    if (mu == cd(0.0, 0.0)) throw Error(ErrorCode::zero_input, "pole at the origin");
  }

  Eigen::MatrixXcd basis(n, p);
  Eigen::Index col = 0;
  for (std::size_t m = 0; m < merged.size(); ++m) {
    for (int j = 0; j < merged.multiplicity(m); ++j, ++col) {
      cd power = 1.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        basis(t, col) = power * std::pow(static_cast<double>(t), j);
        power *= merged.poles[m];
      }
    }
  }
  const Eigen::VectorXd scale = basis.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < p; ++c) {
    if (!(scale[c] > 0.0) || !std::isfinite(scale[c])) {
      throw Error(ErrorCode::ill_conditioned_basis, "basis column " + std::to_string(c) + " is degenerate");
    }
    basis.col(c) /= scale[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cond = s[0] / s[p - 1];
  if (!(cond <= 1e12)) {
    throw Error(ErrorCode::ill_conditioned_basis, "basis condition number " + std::to_string(cond) + " > 1e12");
  }
  const Eigen::VectorXcd rhs = series.values().cast<cd>();
  const Eigen::VectorXcd coef = svd.solve(rhs);

  SignalModel model;
  col = 0;
  for (std::size_t m = 0; m < merged.size(); ++m) {
    SignalTerm term{merged.poles[m], {}};
    for (int j = 0; j < merged.multiplicity(m); ++j, ++col) term.coefficients.push_back(coef[col] / scale[col]);
    model.terms.push_back(std::move(term));
  }
  model.residual_rms = (basis * coef - rhs).norm() / std::sqrt(static_cast<double>(n));
  return model;
}

cd forward_backward_root_pair(cd z) {
  const double norm2 = std::norm(z);
  if (norm2 == 0.0) throw Error(ErrorCode::zero_input, "root pairing is undefined at z = 0");
  return std::conj(z) / norm2;
}

TimeSeries ssa_forecast(const TimeSeries& series, const SsaForecastSettings& settings,
                        const ForecastOptions& options) {
  if (settings.rank == 0) throw Error(ErrorCode::invalid_argument, "rank must be at least 1");
  IndexSet group(settings.rank);
  std::iota(group.begin(), group.end(), std::size_t{0});

  const auto decomposition = [&](Eigen::Index window) {
    return settings.method == DecompositionMethod::basic ? decompose_leading(series, window, settings.rank)
                                                         : decompose_toeplitz(series, window);
  };
  const EigentripleSet rec_ets = decomposition(settings.reconstruction_window);
  const TimeSeries reconstructed = reconstruct_from(rec_ets, group);
  const EigentripleSet lrf_ets = settings.lrf_window == settings.reconstruction_window
                                     ? rec_ets
                                     : decomposition(settings.lrf_window);
  const LinearRecurrence lrf = min_norm_lrf(signal_basis(lrf_ets, settings.rank));
  const Eigen::VectorXd seed = reconstructed.tail(static_cast<std::size_t>(lrf.order()));
  return recurrent_forecast(std::span<const double>(seed.data(), static_cast<std::size_t>(seed.size())), lrf,
                            settings.steps, options);
}

}  // namespace ssalab
