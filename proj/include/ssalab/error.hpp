#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssalab {

enum class ErrorCode {
  window_out_of_range,
  decomposition_failed,
  index_out_of_range,
  zero_residual,
  rank_too_large,
  dimension_mismatch,
  vertical_subspace,
  all_zero_coefficients,
  ill_conditioned_basis,
  zero_input,
  rank_deficient_shift,
  tls_degenerate,
  empty_noise_basis,
  nonpositive_eigenvalue,
  too_few_roots_inside,
  fewer_peaks_than_requested,
  invalid_spec,
  out_of_domain,
  forecast_diverged,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

// Domain error raised by every library operation. The message names the
// precondition that failed.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace ssalab
