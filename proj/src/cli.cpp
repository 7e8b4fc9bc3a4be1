#include "ssalab/cli.hpp"

#include "ssalab/error.hpp"
#include "ssalab/estimate.hpp"
#include "ssalab/forecast.hpp"
#include "ssalab/io.hpp"
#include "ssalab/simlab/config.hpp"
#include "ssalab/simlab/experiment.hpp"
#include "ssalab/ssa.hpp"
#include "ssalab/subspace.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

namespace ssalab::cli {

namespace {

// Bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string decomposition;
  long long window = 0;
  long long lrf_window = 0;
  long long rank = 0;
  std::string group;
  std::string method;
  long long steps = 1;
  long long reps = 0;
  std::optional<std::uint64_t> seed;
  bool toeplitz = false;
  bool center = false;
  std::string config;
  std::string format = "csv";
  bool verbose = false;
  long long grid = static_cast<long long>(kDefaultGridSize);
  long long peaks = 0;
};

class Context {
public:
  Context(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  TimeSeries load() const {
    if (o_.input.empty()) throw UsageError("--input is required");
    return read_series_csv(std::filesystem::path(o_.input));
  }

  Eigen::Index window(std::size_t n) const {
    if (o_.window > 0) return static_cast<Eigen::Index>(o_.window);
    if (o_.window < 0) throw UsageError("--window must be positive");
    const auto l = static_cast<Eigen::Index>((n + 1) / 2);
    if (o_.verbose) {
      err_ << "window L=" << l << " (default floor((N+1)/2): slightly less than half the series length "
           << "balances separability against the number of lagged vectors)\n";
    }
    return l;
  }

  std::size_t rank() const {
    if (o_.rank < 1) throw UsageError("--rank is required and must be at least 1");
    return static_cast<std::size_t>(o_.rank);
  }

  void emit(const std::string& text) const {
    if (o_.output.empty()) {
      out_ << text;
    } else {
      write_text_file(o_.output, text);
    }
  }

  void note(const std::string& text) const {
    if (o_.verbose) err_ << text << '\n';
  }

  std::ostream& err() const { return err_; }
  const Options& options() const { return o_; }

private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string series_text(const TimeSeries& s, const std::string& format, const std::string& header) {
  std::ostringstream ss;
  if (format == "json") {
    nlohmann::json j = s.to_vector();
    ss << j.dump() << '\n';
  } else {
    write_series_csv(ss, s, header);
  }
  return ss.str();
}

IndexSet parse_group(const std::string& text) {
  try {
    return parse_index_set(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--group: ") + e.what());
  }
}

TimeSeries shift(const TimeSeries& s, double mean) {
  if (mean == 0.0) return s;
  return TimeSeries(Eigen::VectorXd(s.values().array() + mean));
}

EigentripleSet decompose_series(const Context& ctx, const TimeSeries& series, Eigen::Index window) {
  if (ctx.options().toeplitz) return decompose_toeplitz(series, window);
  return decompose(embed(series, window));
}

int cmd_decompose(const Context& ctx) {
  const TimeSeries raw = ctx.load();
  const Centered c = ctx.options().center ? center(raw) : Centered{raw, 0.0};
  const EigentripleSet ets = decompose_series(ctx, c.series, ctx.window(raw.size()));
  if (ctx.options().format == "csv") {
    std::ostringstream ss;
    ss << "index,sigma\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < ets.size(); ++i) ss << i + 1 << ',' << ets.triples[i].sigma << '\n';
    ctx.emit(ss.str());
    return kExitOk;
  }
  nlohmann::json j = nlohmann::json::parse(eigentriples_to_json(ets));
  if (ctx.options().center) j["mean"] = c.mean;
  ctx.emit(j.dump(1) + "\n");
  return kExitOk;
}

int cmd_reconstruct(const Context& ctx) {
  const Options& o = ctx.options();
  IndexSet group;
  if (!o.group.empty()) {
    group = parse_group(o.group);
  } else if (o.rank > 0) {
    group.resize(static_cast<std::size_t>(o.rank));
    std::iota(group.begin(), group.end(), std::size_t{0});
  } else {
    throw UsageError("reconstruct needs --group or --rank");
  }

  if (!o.decomposition.empty()) {
    const std::string text = read_text_file(o.decomposition);
    const EigentripleSet ets = eigentriples_from_json(text);
    double mean = 0.0;
    try {
      const auto j = nlohmann::json::parse(text);
      if (j.contains("mean")) mean = j.at("mean").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("decomposition JSON: ") + e.what());
    }
    ctx.emit(series_text(shift(reconstruct_from(ets, group), mean), o.format, "reconstruction"));
    return kExitOk;
  }
  const TimeSeries raw = ctx.load();
  const Centered c = o.center ? center(raw) : Centered{raw, 0.0};
  const EigentripleSet ets = decompose_series(ctx, c.series, ctx.window(raw.size()));
  ctx.emit(series_text(shift(reconstruct_from(ets, group), c.mean), o.format, "reconstruction"));
  return kExitOk;
}

int cmd_forecast(const Context& ctx) {
  const Options& o = ctx.options();
  const TimeSeries raw = ctx.load();
  const Centered c = o.center ? center(raw) : Centered{raw, 0.0};
  if (o.steps < 1) throw UsageError("--steps must be at least 1");
  if (o.toeplitz) {
    ctx.err() << "warning: Toeplitz decompositions lose the shift structure of nonstationary series; "
                 "the forecast may be badly wrong\n";
  }
  SsaForecastSettings settings;
  settings.reconstruction_window = ctx.window(raw.size());
  settings.lrf_window = o.lrf_window > 0 ? static_cast<Eigen::Index>(o.lrf_window) : settings.reconstruction_window;
  settings.rank = ctx.rank();
  settings.steps = static_cast<std::size_t>(o.steps);
  settings.method = o.toeplitz ? DecompositionMethod::toeplitz : DecompositionMethod::basic;
  ctx.emit(series_text(shift(ssa_forecast(c.series, settings), c.mean), o.format, "forecast"));
  return kExitOk;
}

std::size_t default_peaks(std::size_t rank) { return (rank + 1) / 2; }

Pseudospectrum spectrum_for(const Context& ctx, const TimeSeries& series, Eigen::Index window, std::size_t rank,
                            const std::string& method) {
  const auto grid = static_cast<std::size_t>(ctx.options().grid);
  if (method == "minnorm") {
    const EigentripleSet ets = decompose_series(ctx, series, window);
    return pseudospectrum_minnorm(signal_basis(ets, rank), grid);
  }
  const NoiseSubspace noise = noise_subspace(embed(series, window), rank);
  if (method == "music") return pseudospectrum_music(noise.basis, grid);
  std::vector<double> lambdas(noise.eigenvalues.data(), noise.eigenvalues.data() + noise.eigenvalues.size());
  return pseudospectrum_music(noise.basis, grid, NoiseWeights::ev, lambdas);
}

int cmd_estimate(const Context& ctx) {
  const Options& o = ctx.options();
  const TimeSeries raw = ctx.load();
  const TimeSeries series = o.center ? center(raw).series : raw;
  const Eigen::Index window = ctx.window(raw.size());
  const std::size_t rank = ctx.rank();
  const std::string& m = o.method;

  std::vector<ParamEstimate> params;
  if (m == "esprit-ls" || m == "esprit-tls" || m == "root-minnorm") {
    const SubspaceBasis basis = signal_basis(decompose_series(ctx, series, window), rank);
    PoleSet poles;
    if (m == "esprit-ls") {
      poles = esprit_ls(basis).poles();
    } else if (m == "esprit-tls") {
      poles = esprit_tls(basis).poles();
    } else {
      poles = root_min_norm(min_norm_lrf(basis), rank);
    }
    params = poles_to_params(poles);
  } else if (m == "root-music") {
    params = poles_to_params(root_music(noise_subspace(embed(series, window), rank).basis, rank));
  } else if (m == "minnorm" || m == "music" || m == "ev") {
    const Pseudospectrum ps = spectrum_for(ctx, series, window, rank, m);
    const std::size_t count = o.peaks > 0 ? static_cast<std::size_t>(o.peaks) : default_peaks(rank);
    for (double w : find_peaks(ps, count)) {
      params.push_back({w, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()});
    }
  } else {
    throw UsageError("--method must be one of esprit-ls, esprit-tls, root-music, root-minnorm, minnorm, music, ev");
  }
  std::sort(params.begin(), params.end(), [](const ParamEstimate& a, const ParamEstimate& b) {
    return a.frequency < b.frequency || (a.frequency == b.frequency && a.modulus > b.modulus);
  });

  std::ostringstream ss;
  if (o.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    const auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    for (const auto& p : params) {
      j.push_back({{"frequency", p.frequency}, {"damping", num(p.damping)}, {"modulus", num(p.modulus)}});
    }
    ss << j.dump(1) << '\n';
  } else {
    write_params_csv(ss, params);
  }
  ctx.emit(ss.str());
  return kExitOk;
}

int cmd_pseudospectrum(const Context& ctx) {
  const Options& o = ctx.options();
  const std::string method = o.method.empty() ? "music" : o.method;
  if (method != "minnorm" && method != "music" && method != "ev") {
    throw UsageError("--method for pseudospectrum must be minnorm, music or ev");
  }
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  const TimeSeries raw = ctx.load();
  const TimeSeries series = o.center ? center(raw).series : raw;
  const Pseudospectrum ps = spectrum_for(ctx, series, ctx.window(raw.size()), ctx.rank(), method);
  std::ostringstream ss;
  if (o.format == "json") {
    ss << nlohmann::json({{"method", std::string(to_string(ps.method))}, {"omega", ps.grid}, {"value", ps.values}})
              .dump()
       << '\n';
  } else {
    write_pseudospectrum_csv(ss, ps);
  }
  ctx.emit(ss.str());
  return kExitOk;
}

int cmd_simulate(const Context& ctx) {
  const Options& o = ctx.options();
  if (o.config.empty()) throw UsageError("simulate needs --config");
  simlab::ExperimentConfig cfg = simlab::parse_experiment_config(read_text_file(o.config));
  if (o.reps > 0) cfg.settings.reps = static_cast<std::size_t>(o.reps);
  if (o.seed) cfg.settings.seed = *o.seed;
  if (!o.output.empty()) cfg.output = o.output;
  ctx.note("simulate: " + std::string(simlab::to_string(cfg.settings.signal.kind)) + ", N=" +
           std::to_string(cfg.settings.signal.length) + ", reps=" + std::to_string(cfg.settings.reps) +
           ", workers=" + std::to_string(simlab::worker_count(cfg.settings.threads)));

  std::string csv;
  std::string json;
  switch (cfg.kind) {
    case simlab::ExperimentKind::surface: {
      const auto surface = simlab::mc_error_surface(cfg.settings);
      csv = simlab::surface_to_csv(surface);
      json = simlab::surface_to_json(surface, cfg.settings);
      for (const auto& cell : surface.cells) {
        if (cell.failures > 0) {
          ctx.err() << "warning: L=" << cell.window << ": " << cell.failures
                    << " replications failed: " << cell.failure_messages.front() << '\n';
        }
      }
      break;
    }
    case simlab::ExperimentKind::convergence: {
      const auto report = simlab::convergence_ratio(cfg.settings, cfg.n1, cfg.policies);
      csv = simlab::convergence_to_csv(report);
      json = simlab::convergence_to_json(report);
      break;
    }
    case simlab::ExperimentKind::forecast_split: {
      std::vector<simlab::ForecastSplit> rows;
      for (const auto l : cfg.lrf_windows) {
        rows.push_back(simlab::forecast_error_split(cfg.settings, l, cfg.reconstruction_window));
      }
      csv = simlab::forecast_split_to_csv(rows);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) {
        j.push_back({{"L_lrf", r.lrf_window}, {"L_rec", r.reconstruction_window}, {"total", r.total},
                     {"lrf_only", r.lrf_only}, {"rec_only", r.rec_only}, {"reps", r.reps},
                     {"failures", r.failures}});
      }
      json = j.dump(1);
      break;
    }
  }
  if (cfg.output.empty()) {
    ctx.emit(o.format == "json" ? json + "\n" : csv);
  } else {
    write_text_file(cfg.output + ".csv", csv);
    write_text_file(cfg.output + ".json", json + "\n");
    ctx.note("wrote " + cfg.output + ".csv and " + cfg.output + ".json");
  }
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Singular spectrum analysis and subspace estimation", "ssalab"};
  app.require_subcommand(1, 1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "input series CSV");
    sub->add_option("--output", o.output, "output file (default stdout)");
    sub->add_option("-L,--window", o.window, "window length (default floor((N+1)/2))");
    sub->add_flag("--toeplitz", o.toeplitz, "Toeplitz lag-covariance decomposition");
    sub->add_flag("--center", o.center, "subtract the mean before analysis");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--verbose", o.verbose, "print chosen defaults to stderr");
  };

  auto* decompose_cmd = app.add_subcommand("decompose", "eigentriples of the trajectory matrix");
  common(decompose_cmd);
  decompose_cmd->get_option("--format")->default_str("json");

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "reconstruct a group of eigentriples");
  common(reconstruct_cmd);
  reconstruct_cmd->add_option("--group", o.group, "1-based eigentriples, e.g. 1,2,5-8");
  reconstruct_cmd->add_option("-r,--rank", o.rank, "use eigentriples 1..r");
  reconstruct_cmd->add_option("--from-decomposition", o.decomposition, "decomposition JSON from `decompose`");

  auto* forecast_cmd = app.add_subcommand("forecast", "recurrent SSA forecast");
  common(forecast_cmd);
  forecast_cmd->add_option("-r,--rank", o.rank, "signal rank")->required();
  forecast_cmd->add_option("--steps", o.steps, "forecast horizon");
  forecast_cmd->add_option("--lrf-window", o.lrf_window, "window for the recurrence (default --window)");

  auto* estimate_cmd = app.add_subcommand("estimate", "frequency and damping estimation");
  common(estimate_cmd);
  estimate_cmd->add_option("-r,--rank", o.rank, "signal rank")->required();
  estimate_cmd->add_option("--method", o.method, "estimator")
      ->required()
      ->check(CLI::IsMember({"esprit-ls", "esprit-tls", "root-music", "root-minnorm", "minnorm", "music", "ev"}));
  estimate_cmd->add_option("--peaks", o.peaks, "pseudospectrum peaks to report (default ceil(r/2))");
  estimate_cmd->add_option("--grid", o.grid, "pseudospectrum grid size");

  auto* ps_cmd = app.add_subcommand("pseudospectrum", "MUSIC, EV or Min-Norm pseudospectrum");
  common(ps_cmd);
  ps_cmd->add_option("-r,--rank", o.rank, "signal rank")->required();
  ps_cmd->add_option("--method", o.method, "minnorm, music or ev");
  ps_cmd->add_option("--grid", o.grid, "grid size on [0, 0.5]");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo experiment from a JSON config");
  sim_cmd->add_option("--config", o.config, "experiment config JSON")->required();
  sim_cmd->add_option("--output", o.output, "output prefix for .csv and .json (default: config 'output')");
  sim_cmd->add_option("--reps", o.reps, "override replication count");
  sim_cmd->add_option("--seed", o.seed, "override master seed");
  sim_cmd->add_option("--format", o.format, "stdout format when no output prefix")
      ->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_flag("--verbose", o.verbose, "progress notes to stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ssalab: parse-error: " << one_line(e.what()) << '\n';
    return kExitParse;
  }
  if (decompose_cmd->parsed() && decompose_cmd->count("--format") == 0) o.format = "json";

  const Context ctx(o, out, err);
  try {
    if (decompose_cmd->parsed()) return cmd_decompose(ctx);
    if (reconstruct_cmd->parsed()) return cmd_reconstruct(ctx);
    if (forecast_cmd->parsed()) return cmd_forecast(ctx);
    if (estimate_cmd->parsed()) return cmd_estimate(ctx);
    if (ps_cmd->parsed()) return cmd_pseudospectrum(ctx);
    if (sim_cmd->parsed()) return cmd_simulate(ctx);
  } catch (const UsageError& e) {
    err << "ssalab: parse-error: " << one_line(e.what()) << '\n';
    return kExitParse;
  } catch (const ParseError& e) {
    err << "ssalab: parse-error: " << one_line(e.what()) << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    err << "ssalab: io-error: " << one_line(e.what()) << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "ssalab: domain-error: " << one_line(e.what()) << '\n';
    return kExitDomain;
  }
  err << "ssalab: parse-error: no subcommand\n";
  return kExitParse;
}

}  // namespace ssalab::cli
