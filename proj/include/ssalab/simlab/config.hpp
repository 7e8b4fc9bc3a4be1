#pragma once

#include "ssalab/simlab/experiment.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace ssalab::simlab {

enum class ExperimentKind { surface, convergence, forecast_split };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::surface;
  ExperimentSettings settings;
  std::string output;  // path prefix for <output>.csv and <output>.json; empty means stdout

  std::size_t n1 = 399;  // convergence
  std::vector<WindowPolicy> policies;

  std::vector<Eigen::Index> lrf_windows;  // forecast_split
  Eigen::Index reconstruction_window = 0;
};

// Parses
//   {"experiment": "surface" | "convergence" | "forecast_split",
//    "signal": {"kind", "N", "b", "c", "sigma", "alpha", "terms": [{"amplitude", "modulus", "frequency", "phase"}]},
//    "noise": {"kind": "white" | "red", "sigma", "alpha", "seed"},
//    "windows": [L, ...] | {"from", "to", "step"},
//    "reps", "functional", "seed", "rank", "threads", "output",
//    "N1", "policies": ["r+1", 20, "(N+1)/2-5", "(N+1)/2"],
//    "lrf_windows": [...], "L_rec"}
// Malformed JSON throws ParseError; bad values throw Error(invalid-spec).
ExperimentConfig parse_experiment_config(const std::string& text);

}  // namespace ssalab::simlab
