#include "ssalab/simlab/experiment.hpp"

#include "ssalab/error.hpp"
#include "ssalab/estimate.hpp"
#include "ssalab/forecast.hpp"
#include "ssalab/simlab/random.hpp"
#include "ssalab/ssa.hpp"
#include "ssalab/subspace.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace ssalab::simlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUnavailable = 1e-12;

IndexSet leading(std::size_t rank) {
  IndexSet idx(rank);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::size_t resolve_rank(const ExperimentSettings& s) {
  if (s.rank > 0) return s.rank;
  const auto r = signal_rank(s.signal);
  if (!r) throw Error(ErrorCode::invalid_spec, "signal kind '" + std::string(to_string(s.signal.kind)) +
                                                   "' has no finite rank; set rank explicitly");
  return *r;
}

double frequency_of(std::complex<double> z) { return std::abs(std::arg(z)) / (2.0 * std::numbers::pi); }

// Each true nonnegative-frequency pole is matched to the estimate nearest in
// frequency (ties broken by complex distance). Returns the RMS over true poles.
double parameter_error(const PoleSet& truth, const PoleSet& estimate, Functional f) {
  const PoleSet targets = nonnegative_frequency_poles(truth);
  if (estimate.size() == 0) throw Error(ErrorCode::invalid_argument, "no estimated poles");
  double sum = 0.0;
  for (const auto& t : targets.poles) {
    const double wt = frequency_of(t);
    std::size_t best = 0;
    for (std::size_t i = 1; i < estimate.size(); ++i) {
      const double di = std::abs(frequency_of(estimate.poles[i]) - wt);
      const double db = std::abs(frequency_of(estimate.poles[best]) - wt);
      if (di < db || (di == db && std::abs(estimate.poles[i] - t) < std::abs(estimate.poles[best] - t))) best = i;
    }
    const auto& e = estimate.poles[best];
    const double err = f == Functional::frequency ? frequency_of(e) - wt : std::log(std::abs(e)) - std::log(std::abs(t));
    sum += err * err;
  }
  return std::sqrt(sum / static_cast<double>(targets.size()));
}

struct Truth {
  Eigen::Index window = 0;
  std::optional<SubspaceBasis> basis;  // projector functional
};

class Runner {
public:
  explicit Runner(const ExperimentSettings& s) : s_(s), rank_(resolve_rank(s)) {
    s_.signal.validate();
    if (s_.reps < 1) throw Error(ErrorCode::invalid_argument, "reps must be at least 1");
    const auto n = s_.signal.length;
    extended_ = signal_values(s_.signal, n + 1);
    signal_ = TimeSeries(Eigen::VectorXd(extended_.head(static_cast<Eigen::Index>(n))));
    if (s_.functional == Functional::frequency || s_.functional == Functional::base) {
      const auto poles = true_poles(s_.signal);
      if (!poles) throw Error(ErrorCode::invalid_spec, "parameter functionals need a finite-rank signal");
      poles_ = *poles;
    }
  }

  std::size_t rank() const { return rank_; }

  Truth truth(Eigen::Index window) const {
    Truth t;
    t.window = window;
    if (s_.functional == Functional::projector) {
      t.basis = signal_basis(decompose_leading(signal_, window, rank_), rank_);
    }
    return t;
  }

  TimeSeries observed(std::size_t rep) const {
    return gen_series(s_.signal, hash64(s_.seed, s_.experiment_id, rep)).observed();
  }

  double error(const TimeSeries& f, const Truth& truth) const {
    const Eigen::Index window = truth.window;
    const auto n = static_cast<Eigen::Index>(s_.signal.length);
    switch (s_.functional) {
      case Functional::projector: {
        const SubspaceBasis est = signal_basis(decompose_leading(f, window, rank_), rank_);
        return subspace_distance(est, *truth.basis);
      }
      case Functional::reconstruction:
      case Functional::reconstruction_last10: {
        const TimeSeries rec = reconstruct_from(decompose_leading(f, window, rank_), leading(rank_));
        const Eigen::VectorXd diff = rec.values() - signal_.values();
        if (s_.functional == Functional::reconstruction) return diff.norm() / std::sqrt(static_cast<double>(n));
        const Eigen::Index m = std::min<Eigen::Index>(10, n);
        return diff.tail(m).norm() / std::sqrt(static_cast<double>(m));
      }
      case Functional::forecast_1step: {
        const TimeSeries fc = ssa_forecast(f, {window, window, rank_, 1, DecompositionMethod::basic});
        return std::abs(fc[0] - extended_[n]);
      }
      case Functional::frequency:
      case Functional::base: {
        const SubspaceBasis est = signal_basis(decompose_leading(f, window, rank_), rank_);
        return parameter_error(poles_, esprit_ls(est).poles(), s_.functional);
      }
    }
    return kNaN;
  }

private:
  ExperimentSettings s_;
  std::size_t rank_;
  Eigen::VectorXd extended_;
  TimeSeries signal_;
  PoleSet poles_;
};

struct Slot {
  double value = kNaN;
  std::string failure;
};

// Slot matrix [rep][window] filled by the worker pool.
std::vector<std::vector<Slot>> run_slots(const ExperimentSettings& settings, const std::vector<Eigen::Index>& windows,
                                         std::size_t& rank_out) {
  const Runner runner(settings);
  rank_out = runner.rank();
  std::vector<Truth> truths;
  truths.reserve(windows.size());
  for (const auto w : windows) truths.push_back(runner.truth(w));

  std::vector<std::vector<Slot>> slots(settings.reps, std::vector<Slot>(windows.size()));
  parallel_for(settings.reps, worker_count(settings.threads), [&](std::size_t rep) {
    const TimeSeries f = runner.observed(rep);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      try {
        slots[rep][w].value = runner.error(f, truths[w]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::vertical_subspace) throw;
        slots[rep][w].failure = e.what();
      }
    }
  });
  return slots;
}

}  // namespace

std::string_view to_string(Functional f) {
  switch (f) {
    case Functional::projector: return "projector";
    case Functional::reconstruction: return "reconstruction";
    case Functional::reconstruction_last10: return "reconstruction-last-10";
    case Functional::forecast_1step: return "forecast-1-step";
    case Functional::frequency: return "frequency";
    case Functional::base: return "base";
  }
  return "unknown";
}

Functional parse_functional(std::string_view text) {
  for (auto f : {Functional::projector, Functional::reconstruction, Functional::reconstruction_last10,
                 Functional::forecast_1step, Functional::frequency, Functional::base}) {
    if (to_string(f) == text) return f;
  }
  if (text == "damping") return Functional::base;
  throw Error(ErrorCode::invalid_spec, "unknown functional '" + std::string(text) + "'");
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SSA_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ErrorSurface mc_error_surface(const ExperimentSettings& settings) {
  if (settings.windows.empty()) throw Error(ErrorCode::invalid_argument, "window list is empty");
  ErrorSurface surface;
  surface.functional = settings.functional;
  const auto slots = run_slots(settings, settings.windows, surface.rank);
  for (std::size_t w = 0; w < settings.windows.size(); ++w) {
    ErrorCell cell;
    cell.window = settings.windows[w];
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& row : slots) {
      const Slot& s = row[w];
      if (!s.failure.empty()) {
        ++cell.failures;
        if (std::find(cell.failure_messages.begin(), cell.failure_messages.end(), s.failure) ==
            cell.failure_messages.end()) {
          cell.failure_messages.push_back(s.failure);
        }
        continue;
      }
      sum += s.value;
      sum2 += s.value * s.value;
      ++cell.reps;
    }
    if (cell.reps == 0) {
      cell.msd = cell.rmse = cell.std_error = kNaN;
    } else {
      const auto k = static_cast<double>(cell.reps);
      cell.msd = sum / k;
      cell.rmse = std::sqrt(sum2 / k);
      const double var = cell.reps > 1 ? std::max(0.0, (sum2 - k * cell.msd * cell.msd) / (k - 1.0)) : 0.0;
      cell.std_error = std::sqrt(var / k);
    }
    surface.cells.push_back(std::move(cell));
  }
  return surface;
}

std::vector<double> replication_errors(const ExperimentSettings& settings, Eigen::Index window) {
  std::size_t rank = 0;
  const auto slots = run_slots(settings, {window}, rank);
  std::vector<double> out;
  out.reserve(slots.size());
  for (const auto& row : slots) out.push_back(row[0].value);
  return out;
}

std::vector<double> point_errors(const ExperimentSettings& settings, Eigen::Index window, std::size_t point) {
  if (point >= settings.signal.length) throw Error(ErrorCode::index_out_of_range, "point outside the series");
  const Runner runner(settings);
  const std::size_t rank = runner.rank();
  const Eigen::VectorXd s = signal_values(settings.signal, settings.signal.length);
  std::vector<double> out(settings.reps, kNaN);
  parallel_for(settings.reps, worker_count(settings.threads), [&](std::size_t rep) {
    const TimeSeries rec = reconstruct_from(decompose_leading(runner.observed(rep), window, rank), leading(rank));
    out[rep] = rec[point] - s[static_cast<Eigen::Index>(point)];
  });
  return out;
}

Eigen::Index WindowPolicy::window_for(std::size_t n) const {
  const auto half = static_cast<Eigen::Index>((n + 1) / 2);
  switch (kind) {
    case Kind::fixed: return fixed_window;
    case Kind::half_minus_5: return half - 5;
    case Kind::half: return half;
  }
  return 0;
}

std::string WindowPolicy::label() const {
  switch (kind) {
    case Kind::fixed: return std::to_string(fixed_window);
    case Kind::half_minus_5: return "(N+1)/2-5";
    case Kind::half: return "(N+1)/2";
  }
  return "?";
}

std::vector<WindowPolicy> default_window_policies(std::size_t rank) {
  using K = WindowPolicy::Kind;
  return {{K::fixed, static_cast<Eigen::Index>(rank + 1)}, {K::fixed, 20}, {K::fixed, 25}, {K::half_minus_5, 0},
          {K::half, 0}};
}

ConvergenceReport convergence_ratio(const ExperimentSettings& settings, std::size_t n1,
                                    const std::vector<WindowPolicy>& policies) {
  if (settings.reps < 100) throw Error(ErrorCode::invalid_argument, "convergence study needs reps >= 100");
  if (policies.empty()) throw Error(ErrorCode::invalid_argument, "no window policies");
  ConvergenceReport report;
  report.n1 = n1;
  // N2 + 1 = 4 (N1 + 1) keeps (N+1)/2 an exact multiple for odd N1.
  report.n2 = 4 * (n1 + 1) - 1;
  report.functional = settings.functional;
  report.reps = settings.reps;

  const auto run = [&](std::size_t n) {
    ExperimentSettings s = settings;
    s.signal.length = n;
    s.experiment_id = hash64(settings.experiment_id, n, 0);
    s.windows.clear();
    for (const auto& p : policies) s.windows.push_back(p.window_for(n));
    return mc_error_surface(s);
  };
  const ErrorSurface first = run(report.n1);
  const ErrorSurface second = run(report.n2);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    ConvergenceCell cell;
    cell.policy = policies[i].label();
    cell.window1 = first.cells[i].window;
    cell.window2 = second.cells[i].window;
    cell.rmse1 = first.cells[i].rmse;
    cell.rmse2 = second.cells[i].rmse;
    if (cell.rmse1 > kUnavailable && cell.rmse2 > kUnavailable) cell.delta = cell.rmse1 / cell.rmse2;
    report.cells.push_back(std::move(cell));
  }
  return report;
}

ForecastSplit forecast_error_split(const ExperimentSettings& settings, Eigen::Index lrf_window,
                                   Eigen::Index reconstruction_window) {
  const Runner runner(settings);
  const std::size_t rank = runner.rank();
  const std::size_t n = settings.signal.length;
  const Eigen::VectorXd s = signal_values(settings.signal, n + 1);
  const TimeSeries signal(Eigen::VectorXd(s.head(static_cast<Eigen::Index>(n))));
  const LinearRecurrence true_lrf = min_norm_lrf(signal_basis(decompose_leading(signal, lrf_window, rank), rank));
  const auto order = static_cast<std::size_t>(true_lrf.order());
  const double target = s[static_cast<Eigen::Index>(n)];

  struct Row {
    double total = kNaN, lrf = kNaN, rec = kNaN;
  };
  std::vector<Row> rows(settings.reps);
  parallel_for(settings.reps, worker_count(settings.threads), [&](std::size_t rep) {
    const TimeSeries f = runner.observed(rep);
    const TimeSeries rec = reconstruct_from(decompose_leading(f, reconstruction_window, rank), leading(rank));
    LinearRecurrence est;
    try {
      est = min_norm_lrf(signal_basis(decompose_leading(f, lrf_window, rank), rank));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::vertical_subspace) throw;
      return;
    }
    const Eigen::VectorXd rec_tail = rec.tail(order);
    const Eigen::VectorXd true_tail = signal.tail(order);
    const auto step = [](const Eigen::VectorXd& seed, const LinearRecurrence& lrf) {
      return recurrent_forecast(std::span<const double>(seed.data(), static_cast<std::size_t>(seed.size())), lrf, 1)[0];
    };
    rows[rep] = {step(rec_tail, est) - target, step(true_tail, est) - target, step(rec_tail, true_lrf) - target};
  });

  ForecastSplit out;
  out.lrf_window = lrf_window;
  out.reconstruction_window = reconstruction_window;
  double t = 0.0, l = 0.0, r = 0.0;
  for (const auto& row : rows) {
    if (std::isnan(row.total)) {
      ++out.failures;
      continue;
    }
    t += row.total * row.total;
    l += row.lrf * row.lrf;
    r += row.rec * row.rec;
    ++out.reps;
  }
  if (out.reps == 0) {
    out.total = out.lrf_only = out.rec_only = kNaN;
  } else {
    const auto k = static_cast<double>(out.reps);
    out.total = std::sqrt(t / k);
    out.lrf_only = std::sqrt(l / k);
    out.rec_only = std::sqrt(r / k);
  }
  return out;
}

double red_noise_projector_bound(const SignalSpec& spec, Eigen::Index window, std::size_t rank) {
  const TimeSeries signal(signal_values(spec, spec.length));
  const TrajectoryMatrix x = embed(signal, window);
  const Eigen::MatrixXd& s = x.matrix();
  const Eigen::Index l = s.rows();
  const EigentripleSet ets = decompose(x);
  const Eigen::MatrixXd u = signal_basis(ets, rank).matrix();
  // (S S^T)^+ from the retained triples.
  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(l, l);
  for (std::size_t i = 0; i < rank; ++i) {
    pinv += ets.triples[i].u * ets.triples[i].u.transpose() / (ets.triples[i].sigma * ets.triples[i].sigma);
  }
  Eigen::MatrixXd sigma(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j)
      sigma(i, j) = spec.sigma * spec.sigma * std::pow(spec.alpha, static_cast<double>(std::abs(i - j)));
  const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(l, l) - u * u.transpose();
  const Eigen::MatrixXd m = static_cast<double>(s.cols()) * pinv * sigma * complement;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

}  // namespace

std::string surface_to_csv(const ErrorSurface& surface) {
  std::ostringstream out;
  out << "L,functional,MSD,RMSE,reps,std_error,failures\n";
  for (const auto& c : surface.cells) {
    out << c.window << ',' << to_string(surface.functional) << ',' << fmt(c.msd) << ',' << fmt(c.rmse) << ','
        << c.reps << ',' << fmt(c.std_error) << ',' << c.failures << '\n';
  }
  return out.str();
}

std::string surface_to_json(const ErrorSurface& surface, const ExperimentSettings& settings) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : surface.cells) {
    cells.push_back({{"L", c.window},
                     {"MSD", num(c.msd)},
                     {"RMSE", num(c.rmse)},
                     {"std_error", num(c.std_error)},
                     {"reps", c.reps},
                     {"failures", c.failures},
                     {"failure_messages", c.failure_messages}});
  }
  nlohmann::json j = {{"functional", std::string(to_string(surface.functional))},
                      {"signal", std::string(to_string(settings.signal.kind))},
                      {"N", settings.signal.length},
                      {"rank", surface.rank},
                      {"seed", settings.seed},
                      {"cells", std::move(cells)}};
  return j.dump(1);
}

std::string convergence_to_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "policy,functional,N1,N2,L1,L2,RMSE1,RMSE2,delta,reps\n";
  for (const auto& c : report.cells) {
    out << '"' << c.policy << "\"," << to_string(report.functional) << ',' << report.n1 << ',' << report.n2 << ','
        << c.window1 << ',' << c.window2 << ',' << fmt(c.rmse1) << ',' << fmt(c.rmse2) << ','
        << (c.delta ? fmt(*c.delta) : std::string("NA")) << ',' << report.reps << '\n';
  }
  return out.str();
}

std::string convergence_to_json(const ConvergenceReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"policy", c.policy},
                     {"L1", c.window1},
                     {"L2", c.window2},
                     {"RMSE1", num(c.rmse1)},
                     {"RMSE2", num(c.rmse2)},
                     {"delta", c.delta ? nlohmann::json(*c.delta) : nlohmann::json(nullptr)}});
  }
  nlohmann::json j = {{"functional", std::string(to_string(report.functional))},
                      {"N1", report.n1},
                      {"N2", report.n2},
                      {"reps", report.reps},
                      {"cells", std::move(cells)}};
  return j.dump(1);
}

std::string forecast_split_to_csv(const std::vector<ForecastSplit>& rows) {
  std::ostringstream out;
  out << "L_lrf,L_rec,total,lrf_only,rec_only,reps,failures\n";
  for (const auto& r : rows) {
    out << r.lrf_window << ',' << r.reconstruction_window << ',' << fmt(r.total) << ',' << fmt(r.lrf_only) << ','
        << fmt(r.rec_only) << ',' << r.reps << ',' << r.failures << '\n';
  }
  return out.str();
}

}  // namespace ssalab::simlab
