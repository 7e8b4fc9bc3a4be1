#include "ssalab/series.hpp"

#include "ssalab/error.hpp"

#include <cmath>
#include <string>

namespace ssalab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::window_out_of_range: return "window-out-of-range";
    case ErrorCode::decomposition_failed: return "decomposition-failed";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::zero_residual: return "zero-residual";
    case ErrorCode::rank_too_large: return "rank-too-large";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::vertical_subspace: return "vertical-subspace";
    case ErrorCode::all_zero_coefficients: return "all-zero-coefficients";
    case ErrorCode::ill_conditioned_basis: return "ill-conditioned-basis";
    case ErrorCode::zero_input: return "zero-input";
    case ErrorCode::rank_deficient_shift: return "rank-deficient-shift";
    case ErrorCode::tls_degenerate: return "tls-degenerate";
    case ErrorCode::empty_noise_basis: return "empty-noise-basis";
    case ErrorCode::nonpositive_eigenvalue: return "nonpositive-eigenvalue";
    case ErrorCode::too_few_roots_inside: return "too-few-roots-inside";
    case ErrorCode::fewer_peaks_than_requested: return "fewer-peaks-than-requested";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::forecast_diverged: return "forecast-diverged";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

namespace {

void require_finite(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::invalid_argument,
                  "time series value at index " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

TimeSeries::TimeSeries(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_);
}

TimeSeries::TimeSeries(std::span<const double> values)
    : values_(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))) {
  require_finite(values_);
}

TimeSeries::TimeSeries(std::initializer_list<double> values)
    : TimeSeries(std::span<const double>(values.begin(), values.size())) {}

std::vector<double> TimeSeries::to_vector() const {
  return {values_.data(), values_.data() + values_.size()};
}

Eigen::VectorXd TimeSeries::tail(std::size_t count) const {
  if (count > size()) {
    throw Error(ErrorCode::invalid_argument, "tail length exceeds series length");
  }
  return values_.tail(static_cast<Eigen::Index>(count));
}

TimeSeries operator+(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "series lengths differ");
  return TimeSeries(Eigen::VectorXd(a.values() + b.values()));
}

TimeSeries operator-(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "series lengths differ");
  return TimeSeries(Eigen::VectorXd(a.values() - b.values()));
}

}  // namespace ssalab
