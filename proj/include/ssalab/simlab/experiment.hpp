#pragma once

#include "ssalab/simlab/signals.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssalab::simlab {

enum class Functional {
  projector,              // sine of the largest principal angle to the true signal subspace
  reconstruction,         // |S~ - S| / sqrt(N)
  reconstruction_last10,  // RMS error over the last 10 points
  forecast_1step,         // |f~_N - s_N| of the recurrent forecast
  frequency,              // |omega^ - omega|, LS-ESPRIT
  base,                   // |ln|mu^| - ln|mu||, LS-ESPRIT
};

std::string_view to_string(Functional f);
Functional parse_functional(std::string_view text);  // throws invalid-spec

// Worker count: SSA_LAB_THREADS when set and positive, else hardware concurrency;
// `requested` > 0 overrides both but is still capped by SSA_LAB_THREADS.
std::size_t worker_count(std::size_t requested = 0);

// Runs task(i) for i = 0..count-1 on up to `workers` threads. Exceptions are
// rethrown on the calling thread (lowest index first).
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

struct ExperimentSettings {
  SignalSpec signal;
  std::vector<Eigen::Index> windows;
  std::size_t reps = 100;
  Functional functional = Functional::reconstruction;
  std::uint64_t seed = 1;
  std::uint64_t experiment_id = 0;
  // Number of leading eigentriples; 0 means the signal rank.
  std::size_t rank = 0;
  std::size_t threads = 0;
};

struct ErrorCell {
  Eigen::Index window = 0;
  double msd = 0.0;        // mean of per-replication errors
  double rmse = 0.0;       // square root of the mean squared error
  double std_error = 0.0;  // standard error of the MSD column
  std::size_t reps = 0;    // successful replications
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;  // distinct messages, first occurrence order
};

struct ErrorSurface {
  Functional functional = Functional::reconstruction;
  std::size_t rank = 0;
  std::vector<ErrorCell> cells;
};

ErrorSurface mc_error_surface(const ExperimentSettings& settings);

// Per-replication errors for a single window, in replication order; NaN marks a
// failed replication. Exposed for variance studies.
std::vector<double> replication_errors(const ExperimentSettings& settings, Eigen::Index window);

// Reconstruction error s~_l - s_l at a single point for each replication.
std::vector<double> point_errors(const ExperimentSettings& settings, Eigen::Index window, std::size_t point);

struct WindowPolicy {
  enum class Kind { fixed, half_minus_5, half };
  Kind kind = Kind::half;
  Eigen::Index fixed_window = 0;

  Eigen::Index window_for(std::size_t n) const;
  std::string label() const;
};

struct ConvergenceCell {
  std::string policy;
  Eigen::Index window1 = 0;
  Eigen::Index window2 = 0;
  double rmse1 = 0.0;
  double rmse2 = 0.0;
  std::optional<double> delta;  // empty when an error is at rounding level (exact separability)
};

struct ConvergenceReport {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Functional functional = Functional::reconstruction;
  std::size_t reps = 0;
  std::vector<ConvergenceCell> cells;
};

// Default policies: fixed r+1, 20, 25 and (N+1)/2 - 5, (N+1)/2.
std::vector<WindowPolicy> default_window_policies(std::size_t rank);

// Runs the experiment at N1 and N2 = 4 N1 (settings.signal.length and windows are
// replaced) and reports Delta = RMSE1 / RMSE2 per policy. Requires reps >= 100.
ConvergenceReport convergence_ratio(const ExperimentSettings& settings, std::size_t n1,
                                    const std::vector<WindowPolicy>& policies);

struct ForecastSplit {
  Eigen::Index lrf_window = 0;
  Eigen::Index reconstruction_window = 0;
  double total = 0.0;
  double lrf_only = 0.0;
  double rec_only = 0.0;
  std::size_t reps = 0;
  std::size_t failures = 0;
};

// One-step forecast error split into the recurrence and reconstruction parts.
ForecastSplit forecast_error_split(const ExperimentSettings& settings, Eigen::Index lrf_window,
                                   Eigen::Index reconstruction_window);

// Spectral norm of K (S S^T)^+ Sigma (I - U U^T) for the signal trajectory S and
// AR(1) autocovariance Sigma; the leading term of the red-noise projector error.
double red_noise_projector_bound(const SignalSpec& spec, Eigen::Index window, std::size_t rank);

std::string surface_to_csv(const ErrorSurface& surface);
std::string surface_to_json(const ErrorSurface& surface, const ExperimentSettings& settings);
std::string convergence_to_csv(const ConvergenceReport& report);
std::string convergence_to_json(const ConvergenceReport& report);
std::string forecast_split_to_csv(const std::vector<ForecastSplit>& rows);

}  // namespace ssalab::simlab
