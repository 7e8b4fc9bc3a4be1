#include "ssalab/simlab/signals.hpp"

#include "ssalab/error.hpp"
#include "ssalab/simlab/random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace ssalab::simlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<std::pair<SignalKind, std::string_view>, 10> kKindNames{{
    {SignalKind::const_saw, "const_saw"},
    {SignalKind::damped_cos_const, "damped_cos_const"},
    {SignalKind::damped_cos_wn, "damped_cos_wn"},
    {SignalKind::damped_cos_mix, "damped_cos_mix"},
    {SignalKind::damped_cos_rn, "damped_cos_rn"},
    {SignalKind::two_cos, "two_cos"},
    {SignalKind::chirp_am, "chirp_am"},
    {SignalKind::chirp_trend_mix, "chirp_trend_mix"},
    {SignalKind::exp_trend, "exp_trend"},
    {SignalKind::custom, "custom"},
}};

double chirp(double n) { return std::cos(kTwoPi * n * n / 1e5); }

// Terms of the finite-rank catalog signals in custom form.
std::vector<DampedTerm> finite_rank_terms(const SignalSpec& spec) {
  switch (spec.kind) {
    case SignalKind::const_saw: return {{1.0, 1.0, 0.0, 0.0}};
    case SignalKind::damped_cos_const:
    case SignalKind::damped_cos_wn:
    case SignalKind::damped_cos_mix:
    case SignalKind::damped_cos_rn: return {{1.0, spec.b, 0.1, 0.0}};
    case SignalKind::two_cos: return {{1.0, 1.0, 1.0 / 19.0, 0.0}, {1.0, 1.0, 1.0 / 21.0, 0.0}};
    case SignalKind::exp_trend: return {{1.0, 1.005, 0.0, 0.0}};
    case SignalKind::custom: return spec.terms;
    case SignalKind::chirp_am:
    case SignalKind::chirp_trend_mix: break;
  }
  return {};
}

}  // namespace

std::string_view to_string(SignalKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SignalKind parse_signal_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw Error(ErrorCode::invalid_spec, "unknown signal kind '" + std::string(text) + "'");
}

std::string_view to_string(NoiseKind kind) { return kind == NoiseKind::red ? "red" : "white"; }

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "white") return NoiseKind::white;
  if (text == "red") return NoiseKind::red;
  throw Error(ErrorCode::invalid_spec, "unknown noise kind '" + std::string(text) + "'");
}

void SignalSpec::validate() const {
  if (length < 3) throw Error(ErrorCode::invalid_spec, "series length must be at least 3");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::invalid_spec, "sigma must be >= 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_spec, "alpha must lie in [0, 1)");
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::invalid_spec, "b must be > 0");
  if (!std::isfinite(c)) throw Error(ErrorCode::invalid_spec, "c must be finite");
  if (kind == SignalKind::custom) {
    if (terms.empty()) throw Error(ErrorCode::invalid_spec, "custom signal needs at least one term");
    for (const auto& t : terms) {
      if (!(t.modulus > 0.0) || !std::isfinite(t.modulus)) {
        throw Error(ErrorCode::invalid_spec, "term modulus must be > 0");
      }
      if (!(t.frequency >= 0.0 && t.frequency <= 0.5)) {
        throw Error(ErrorCode::invalid_spec, "term frequency must lie in [0, 0.5]");
      }
      if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
        throw Error(ErrorCode::invalid_spec, "term amplitude and phase must be finite");
      }
    }
  }
}

SignalSpec catalog_spec(SignalKind kind, std::size_t length) {
  SignalSpec spec;
  spec.kind = kind;
  spec.length = length;
  if (kind == SignalKind::two_cos || kind == SignalKind::chirp_trend_mix || kind == SignalKind::exp_trend) {
    spec.sigma = 1.0;
  }
  return spec;
}

Eigen::VectorXd signal_values(const SignalSpec& spec, std::size_t count) {
  const auto n_count = static_cast<Eigen::Index>(count);
  Eigen::VectorXd s(n_count);
  if (spec.kind == SignalKind::chirp_am) {
    for (Eigen::Index n = 0; n < n_count; ++n) {
      const auto x = static_cast<double>(n);
      s[n] = chirp(x) * std::cos(kTwoPi * x / 20.0);
    }
    return s;
  }
  if (spec.kind == SignalKind::chirp_trend_mix) {
    for (Eigen::Index n = 0; n < n_count; ++n) s[n] = chirp(static_cast<double>(n));
    return s;
  }
  s.setZero();
  for (const auto& t : finite_rank_terms(spec)) {
    for (Eigen::Index n = 0; n < n_count; ++n) {
      const auto x = static_cast<double>(n);
      s[n] += t.amplitude * std::pow(t.modulus, x) * std::cos(kTwoPi * t.frequency * x + t.phase);
    }
  }
  return s;
}

GeneratedSeries gen_series(const SignalSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.length);
  NormalSource rng(seed);
  Eigen::VectorXd r(n);
  switch (spec.kind) {
    case SignalKind::const_saw:
      for (Eigen::Index i = 0; i < n; ++i) r[i] = (i % 2 == 0 ? -1.0 : 1.0) * spec.c;
      break;
    case SignalKind::damped_cos_const: r.setConstant(spec.c); break;
    case SignalKind::damped_cos_mix:
      r = (white_noise(rng, n, spec.sigma).array() + spec.c) / std::numbers::sqrt2;
      break;
    case SignalKind::damped_cos_rn: r = red_noise(rng, n, spec.sigma, spec.alpha); break;
    case SignalKind::chirp_trend_mix:
      r = white_noise(rng, n, spec.sigma);
      for (Eigen::Index i = 0; i < n; ++i) r[i] += 0.5 * std::cos(kTwoPi * static_cast<double>(i) / 10.0);
      break;
    case SignalKind::custom:
      r = spec.noise == NoiseKind::red ? red_noise(rng, n, spec.sigma, spec.alpha) : white_noise(rng, n, spec.sigma);
      break;
    case SignalKind::damped_cos_wn:
    case SignalKind::two_cos:
    case SignalKind::chirp_am:
    case SignalKind::exp_trend: r = white_noise(rng, n, spec.sigma); break;
  }
  return {TimeSeries(signal_values(spec, spec.length)), TimeSeries(std::move(r))};
}

std::optional<PoleSet> true_poles(const SignalSpec& spec) {
  if (spec.kind == SignalKind::chirp_am || spec.kind == SignalKind::chirp_trend_mix) return std::nullopt;
  PoleSet raw;
  for (const auto& t : finite_rank_terms(spec)) {
    if (t.amplitude == 0.0) continue;
    const double f = t.frequency;
    if (f == 0.0) {
      raw.poles.emplace_back(t.modulus, 0.0);
    } else if (f == 0.5) {
      raw.poles.emplace_back(-t.modulus, 0.0);
    } else {
      raw.poles.push_back(std::polar(t.modulus, kTwoPi * f));
      raw.poles.push_back(std::polar(t.modulus, -kTwoPi * f));
    }
  }
  PoleSet merged = merge_close_poles(raw, 1e-12);
  merged.multiplicities.clear();
  return merged;
}

std::optional<std::size_t> signal_rank(const SignalSpec& spec) {
  const auto poles = true_poles(spec);
  if (!poles) return std::nullopt;
  return poles->size();
}

}  // namespace ssalab::simlab
