#include "ssalab/simlab/config.hpp"

#include "ssalab/error.hpp"
#include "ssalab/io.hpp"

#include <nlohmann/json.hpp>

namespace ssalab::simlab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::invalid_spec, what); }

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<Eigen::Index> window_list(const json& j, const char* key) {
  std::vector<Eigen::Index> out;
  if (!j.contains(key)) return out;
  const json& w = j.at(key);
  if (w.is_array()) {
    for (const auto& v : w) {
      if (!v.is_number_integer()) bad(std::string("'") + key + "' entries must be integers");
      out.push_back(v.get<Eigen::Index>());
    }
  } else if (w.is_object()) {
    const auto from = get<Eigen::Index>(w, "from", 0);
    const auto to = get<Eigen::Index>(w, "to", 0);
    const auto step = get<Eigen::Index>(w, "step", 1);
    if (step < 1 || from < 1 || to < from) bad(std::string("'") + key + "' range needs 1 <= from <= to, step >= 1");
    for (Eigen::Index l = from; l <= to; l += step) out.push_back(l);
  } else {
    bad(std::string("'") + key + "' must be a list or a {from, to, step} range");
  }
  return out;
}

WindowPolicy parse_policy(const json& p, std::size_t rank) {
  using K = WindowPolicy::Kind;
  if (p.is_number_integer()) return {K::fixed, p.get<Eigen::Index>()};
  if (p.is_string()) {
    const auto s = p.get<std::string>();
    if (s == "r+1") return {K::fixed, static_cast<Eigen::Index>(rank + 1)};
    if (s == "(N+1)/2") return {K::half, 0};
    if (s == "(N+1)/2-5") return {K::half_minus_5, 0};
  }
  bad("unknown window policy " + p.dump());
}

SignalSpec parse_signal(const json& j, const json& noise) {
  if (!j.is_object()) bad("'signal' must be an object");
  const auto kind = parse_signal_kind(get<std::string>(j, "kind", "damped_cos_wn"));
  const auto n = get<long long>(j, "N", 100);
  if (n < 3) bad("signal length N must be at least 3");
  SignalSpec spec = catalog_spec(kind, static_cast<std::size_t>(n));
  spec.b = get(j, "b", spec.b);
  spec.c = get(j, "c", spec.c);
  spec.sigma = get(j, "sigma", spec.sigma);
  spec.alpha = get(j, "alpha", spec.alpha);
  if (noise.is_object()) {
    if (noise.contains("kind")) {
      spec.noise = parse_noise_kind(get<std::string>(noise, "kind", "white"));
      if (kind != SignalKind::custom) {
        const bool red = kind == SignalKind::damped_cos_rn;
        if ((spec.noise == NoiseKind::red) != red) {
          bad("noise kind '" + std::string(to_string(spec.noise)) + "' conflicts with signal kind '" +
              std::string(to_string(kind)) + "'");
        }
      }
    }
    spec.sigma = get(noise, "sigma", spec.sigma);
    spec.alpha = get(noise, "alpha", spec.alpha);
  }
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) bad("'terms' must be a list");
    for (const auto& t : j.at("terms")) {
      spec.terms.push_back({get(t, "amplitude", 1.0), get(t, "modulus", 1.0), get(t, "frequency", 0.0),
                            get(t, "phase", 0.0)});
    }
  }
  spec.validate();
  return spec;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  if (!j.is_object()) bad("experiment config must be a JSON object");

  ExperimentConfig cfg;
  const auto kind = get<std::string>(j, "experiment", "surface");
  if (kind == "surface") {
    cfg.kind = ExperimentKind::surface;
  } else if (kind == "convergence") {
    cfg.kind = ExperimentKind::convergence;
  } else if (kind == "forecast_split") {
    cfg.kind = ExperimentKind::forecast_split;
  } else {
    bad("unknown experiment '" + kind + "'");
  }

  const json noise = j.contains("noise") ? j.at("noise") : json();
  auto& s = cfg.settings;
  s.signal = parse_signal(j.contains("signal") ? j.at("signal") : json::object(), noise);
  s.windows = window_list(j, "windows");
  const auto reps = get<long long>(j, "reps", 100);
  if (reps < 1) bad("reps must be at least 1");
  s.reps = static_cast<std::size_t>(reps);
  s.functional = parse_functional(get<std::string>(j, "functional", "reconstruction"));
  s.seed = get<std::uint64_t>(j, "seed", noise.is_object() ? get<std::uint64_t>(noise, "seed", 1) : 1);
  s.experiment_id = get<std::uint64_t>(j, "experiment_id", 0);
  const auto rank = get<long long>(j, "rank", 0);
  if (rank < 0) bad("rank must be nonnegative");
  s.rank = static_cast<std::size_t>(rank);
  const auto threads = get<long long>(j, "threads", 0);
  if (threads < 0) bad("threads must be nonnegative");
  s.threads = static_cast<std::size_t>(threads);
  cfg.output = get<std::string>(j, "output", "");

  const std::size_t r = s.rank > 0 ? s.rank : signal_rank(s.signal).value_or(2);
  switch (cfg.kind) {
    case ExperimentKind::surface:
      if (s.windows.empty()) bad("surface experiment needs 'windows'");
      break;
    case ExperimentKind::convergence: {
      const auto n1 = get<long long>(j, "N1", static_cast<long long>(s.signal.length));
      if (n1 < 3) bad("N1 must be at least 3");
      cfg.n1 = static_cast<std::size_t>(n1);
      if (j.contains("policies")) {
        if (!j.at("policies").is_array()) bad("'policies' must be a list");
        for (const auto& p : j.at("policies")) cfg.policies.push_back(parse_policy(p, r));
      } else {
        cfg.policies = default_window_policies(r);
      }
      if (s.reps < 100) bad("convergence experiment needs reps >= 100");
      break;
    }
    case ExperimentKind::forecast_split:
      cfg.lrf_windows = window_list(j, "lrf_windows");
      if (cfg.lrf_windows.empty()) bad("forecast_split experiment needs 'lrf_windows'");
      cfg.reconstruction_window =
          get<Eigen::Index>(j, "L_rec", static_cast<Eigen::Index>((s.signal.length + 1) / 2));
      break;
  }
  return cfg;
}

}  // namespace ssalab::simlab
