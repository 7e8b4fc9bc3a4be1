#pragma once

#include "ssalab/forecast.hpp"
#include "ssalab/series.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ssalab::simlab {

// Catalog of test series f_n = s_n + r_n, n = 0..N-1.
//   const_saw         s = 1,                     r = -c (-1)^n
//   damped_cos_const  s = b^n cos(2 pi n / 10),  r = c
//   damped_cos_wn     s = b^n cos(2 pi n / 10),  r = sigma e_n
//   damped_cos_mix    s = b^n cos(2 pi n / 10),  r = (sigma e_n + c) / sqrt(2)
//   damped_cos_rn     s = b^n cos(2 pi n / 10),  r = sigma eta_n (AR(1), parameter alpha)
//   two_cos           s = cos(2 pi n / 19) + cos(2 pi n / 21),  r = sigma e_n
//   chirp_am          s = cos(2 pi n^2 / 1e5) cos(2 pi n / 20), r = sigma e_n
//   chirp_trend_mix   s = cos(2 pi n^2 / 1e5),   r = sigma e_n + 0.5 cos(2 pi n / 10)
//   exp_trend         s = 1.005^n,               r = sigma e_n
//   custom            s = sum of damped cosines, r = white or red noise
enum class SignalKind {
  const_saw,
  damped_cos_const,
  damped_cos_wn,
  damped_cos_mix,
  damped_cos_rn,
  two_cos,
  chirp_am,
  chirp_trend_mix,
  exp_trend,
  custom,
};

std::string_view to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view text);  // throws invalid-spec

enum class NoiseKind { white, red };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

// amplitude * modulus^n * cos(2 pi frequency n + phase)
struct DampedTerm {
  double amplitude = 1.0;
  double modulus = 1.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct SignalSpec {
  SignalKind kind = SignalKind::damped_cos_wn;
  std::size_t length = 100;
  double b = 1.0;
  double c = 0.1;
  double sigma = 0.1;
  double alpha = 0.5;
  NoiseKind noise = NoiseKind::white;  // custom only
  std::vector<DampedTerm> terms;       // custom only

  // Throws invalid-spec.
  void validate() const;
};

// Spec with the catalog's default parameters for `kind` (sigma = 1 for
// two_cos, chirp_trend_mix and exp_trend; 0.1 otherwise).
SignalSpec catalog_spec(SignalKind kind, std::size_t length);

struct GeneratedSeries {
  TimeSeries signal;
  TimeSeries residual;

  TimeSeries observed() const { return signal + residual; }
};

GeneratedSeries gen_series(const SignalSpec& spec, std::uint64_t seed);

// Noise-free s_n for n = 0..count-1 (count may exceed spec.length).
Eigen::VectorXd signal_values(const SignalSpec& spec, std::size_t count);

// Signal roots for finite-rank kinds; empty optional for the chirp kinds.
std::optional<PoleSet> true_poles(const SignalSpec& spec);

std::optional<std::size_t> signal_rank(const SignalSpec& spec);

}  // namespace ssalab::simlab
