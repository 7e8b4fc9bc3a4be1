#include "oracles.hpp"

#include "ssalab/error.hpp"
#include "ssalab/simlab/config.hpp"
#include "ssalab/simlab/experiment.hpp"
#include "ssalab/simlab/random.hpp"
#include "ssalab/simlab/signals.hpp"
#include "ssalab/simlab/variance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace ssalab;
using namespace ssalab::simlab;

namespace {

ExperimentSettings settings_for(SignalKind kind, std::size_t n, Functional f, std::size_t reps) {
  ExperimentSettings s;
  s.signal = catalog_spec(kind, n);
  s.functional = f;
  s.reps = reps;
  s.seed = 12345;
  return s;
}

}  // namespace

TEST(Random, HashIsDeterministicAndSpreads) {
  EXPECT_EQ(hash64(1, 2, 3), hash64(1, 2, 3));
  EXPECT_NE(hash64(1, 2, 3), hash64(1, 2, 4));
  EXPECT_NE(hash64(1, 2, 3), hash64(1, 3, 3));
  EXPECT_NE(hash64(1, 2, 3), hash64(2, 2, 3));
}

TEST(Random, NormalMoments) {
  NormalSource rng(7);
  double s1 = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Random, RedNoiseStationaryMoments) {
  NormalSource rng(99);
  const Eigen::VectorXd eta = red_noise(rng, 1000000, 1.0, 0.5);
  const double mean = eta.mean();
  const Eigen::ArrayXd c = eta.array() - mean;
  const double var = c.square().mean();
  const double lag1 = (c.head(c.size() - 1) * c.tail(c.size() - 1)).mean() / var;
  EXPECT_NEAR(var, 1.0, 0.01);
  EXPECT_NEAR(lag1, 0.5, 0.01);
}

TEST(Signals, ConstSaw) {
  auto spec = catalog_spec(SignalKind::const_saw, 4);
  spec.c = 0.1;
  const auto g = gen_series(spec, 1);
  EXPECT_EQ(g.signal.to_vector(), (std::vector<double>{1, 1, 1, 1}));
  const Eigen::Vector4d r(-0.1, 0.1, -0.1, 0.1);
  EXPECT_LE((g.residual.values() - r).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Signals, ZeroSigmaWhiteNoise) {
  auto spec = catalog_spec(SignalKind::damped_cos_wn, 50);
  spec.sigma = 0.0;
  EXPECT_EQ(gen_series(spec, 3).residual.values(), Eigen::VectorXd::Zero(50));
}

TEST(Signals, CatalogFormulas) {
  auto spec = catalog_spec(SignalKind::damped_cos_mix, 30);
  spec.b = 0.99;
  spec.sigma = 0.0;
  const auto g = gen_series(spec, 1);
  EXPECT_LE((g.signal.values() - oracle::cosine(30, 0.1, 0.99)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((g.residual.values().array() - 0.1 / std::sqrt(2.0)).abs().maxCoeff(), 1e-15);

  const auto two = gen_series(catalog_spec(SignalKind::two_cos, 40), 1);
  EXPECT_LE((two.signal.values() - oracle::cosine(40, 1.0 / 19) - oracle::cosine(40, 1.0 / 21)).norm(), 1e-12);

  const auto e = gen_series(catalog_spec(SignalKind::exp_trend, 199), 1);
  EXPECT_NEAR(e.signal[198], std::pow(1.005, 198), 1e-10);

  const auto chirp = signal_values(catalog_spec(SignalKind::chirp_am, 10), 400);
  EXPECT_NEAR(chirp[300], std::cos(2 * std::numbers::pi * 9e4 / 1e5) * std::cos(2 * std::numbers::pi * 15.0), 1e-12);
}

TEST(Signals, RanksAndPoles) {
  EXPECT_EQ(signal_rank(catalog_spec(SignalKind::const_saw, 10)), 1u);
  EXPECT_EQ(signal_rank(catalog_spec(SignalKind::damped_cos_rn, 10)), 2u);
  EXPECT_EQ(signal_rank(catalog_spec(SignalKind::two_cos, 10)), 4u);
  EXPECT_EQ(signal_rank(catalog_spec(SignalKind::exp_trend, 10)), 1u);
  EXPECT_FALSE(signal_rank(catalog_spec(SignalKind::chirp_am, 10)).has_value());
  SignalSpec custom;
  custom.kind = SignalKind::custom;
  custom.terms = {{1.0, 1.0, 0.0, 0.0}, {2.0, 0.95, 0.2, 0.3}, {1.0, 1.0, 0.5, 0.0}};
  EXPECT_EQ(signal_rank(custom), 4u);
}

TEST(Signals, InvalidSpec) {
  auto spec = catalog_spec(SignalKind::damped_cos_rn, 20);
  spec.alpha = 1.0;
  EXPECT_THROW(gen_series(spec, 1), Error);
  spec.alpha = 0.5;
  spec.sigma = -1.0;
  EXPECT_THROW(gen_series(spec, 1), Error);
  spec.sigma = 0.1;
  spec.b = 0.0;
  EXPECT_THROW(gen_series(spec, 1), Error);
  EXPECT_THROW(parse_signal_kind("nope"), Error);
}

TEST(Signals, SnrEqualization) {
  const std::size_t n = 1000000;
  double ratios[4];
  int i = 0;
  for (auto kind : {SignalKind::damped_cos_const, SignalKind::damped_cos_wn, SignalKind::damped_cos_mix,
                    SignalKind::damped_cos_rn}) {
    const auto g = gen_series(catalog_spec(kind, n), 77);
    ratios[i++] = snr(g.signal, g.residual);
  }
  for (double r : ratios) EXPECT_NEAR(r / ratios[0], 1.0, 0.02);
}

TEST(Variance, BranchValues) {
  EXPECT_NEAR(asymptotic_variance(0.5, 1.0, 1.0, 1), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(asymptotic_variance(0.5, 0.0, 1.0, 1), 16.0 / 3.0, 1e-12);
  EXPECT_NEAR(asymptotic_variance(0.5, 1.0, 0.1, 1000), 0.01 / 1000 * 4.0 / 3.0, 1e-18);
  for (double b : {0.35, 0.4, 0.45}) EXPECT_NEAR(variance_d2(b, 2 * b), variance_d3(b, 2 * b), 1e-9);
}

TEST(Variance, BranchesJoinContinuously) {
  for (double b : {0.1, 0.2, 0.3}) EXPECT_NEAR(variance_d1(b, 2 * b), variance_d3(b, 2 * b), 1e-9);
  for (double b : {0.35, 0.4, 0.45}) {
    const double g = 2 * (1 - 2 * b);
    EXPECT_NEAR(variance_d1(b, g), variance_d2(b, g), 1e-9);
  }
}

TEST(Variance, SymmetriesAndDomain) {
  EXPECT_DOUBLE_EQ(asymptotic_variance(0.3, 0.4, 1, 10), asymptotic_variance(0.7, 0.4, 1, 10));
  EXPECT_DOUBLE_EQ(asymptotic_variance(0.3, 0.4, 1, 10), asymptotic_variance(0.3, 1.6, 1, 10));
  EXPECT_THROW(asymptotic_variance(0.0, 0.5, 1, 10), Error);
  EXPECT_THROW(asymptotic_variance(0.5, 2.5, 1, 10), Error);
}

TEST(Variance, MatchesExactFirstOrderVariance) {
  // The exact first-order variance at finite N converges to the asymptotic form.
  const Eigen::Index n = 1200;
  for (double beta : {0.2, 0.3, 0.4, 0.5}) {
    const auto l = static_cast<Eigen::Index>(beta * n);
    for (double gamma : {0.1, 0.25, 0.5, 0.75, 1.0}) {
      const auto point = static_cast<Eigen::Index>(gamma * n / 2);
      const double exact = oracle::first_order_variance(n, l, point) * n;
      const double asym = asymptotic_variance(static_cast<double>(l) / n, 2.0 * point / n, 1.0, 1) ;
      EXPECT_NEAR(exact / asym, 1.0, 0.02) << "beta=" << beta << " gamma=" << gamma;
    }
  }
}

TEST(ErrorSurface, ExactSeparabilityProjector) {
  auto s = settings_for(SignalKind::const_saw, 99, Functional::projector, 1);
  s.windows = {50, 51};
  const auto surf = mc_error_surface(s);
  EXPECT_LE(surf.cells[0].rmse, 1e-10);
  EXPECT_GT(surf.cells[1].rmse, 1e-4);
}

TEST(ErrorSurface, NoiseFreeReconstructionIsExact) {
  auto s = settings_for(SignalKind::damped_cos_wn, 100, Functional::reconstruction, 5);
  s.signal.sigma = 0.0;
  s.windows = {10, 30, 50};
  for (const auto& c : mc_error_surface(s).cells) EXPECT_LE(c.rmse, 1e-8);
}

TEST(ErrorSurface, SingleReplicationMsdEqualsRmse) {
  auto s = settings_for(SignalKind::damped_cos_wn, 100, Functional::reconstruction, 1);
  s.windows = {20, 40};
  for (const auto& c : mc_error_surface(s).cells) EXPECT_DOUBLE_EQ(c.msd, c.rmse);
}

TEST(ErrorSurface, WhiteNoiseProjectorIncreasesBeyondHalf) {
  auto s = settings_for(SignalKind::damped_cos_wn, 100, Functional::projector, 100);
  for (Eigen::Index l = 50; l <= 90; l += 5) s.windows.push_back(l);
  const auto surf = mc_error_surface(s);
  for (std::size_t i = 1; i < surf.cells.size(); ++i) EXPECT_GT(surf.cells[i].rmse, surf.cells[i - 1].rmse);
}

TEST(ErrorSurface, WorkerCountDoesNotChangeResults) {
  auto s = settings_for(SignalKind::damped_cos_rn, 120, Functional::frequency, 12);
  s.windows = {20, 60};
  s.threads = 1;
  const auto a = mc_error_surface(s);
  s.threads = 4;
  const auto b = mc_error_surface(s);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].msd, b.cells[i].msd);
    EXPECT_EQ(a.cells[i].rmse, b.cells[i].rmse);
  }
  EXPECT_EQ(surface_to_csv(a), surface_to_csv(b));
}

TEST(ErrorSurface, SeedsAreSharedAcrossWindows) {
  auto s = settings_for(SignalKind::damped_cos_wn, 80, Functional::reconstruction, 6);
  s.windows = {30};
  const auto a = replication_errors(s, 30);
  s.windows = {10, 30};
  const auto surf = mc_error_surface(s);
  double sum = 0;
  for (double e : a) sum += e;
  EXPECT_DOUBLE_EQ(surf.cells[1].msd, sum / a.size());
}

TEST(WorkerCount, EnvironmentCap) {
  ::setenv("SSA_LAB_THREADS", "2", 1);
  EXPECT_EQ(worker_count(8), 2u);
  EXPECT_LE(worker_count(), 2u);
  ::unsetenv("SSA_LAB_THREADS");
  EXPECT_EQ(worker_count(3), 3u);
}

TEST(Convergence, ExactSeparabilityCellsUnavailable) {
  auto s = settings_for(SignalKind::damped_cos_const, 99, Functional::projector, 100);
  s.threads = 1;
  // Constant residual with L = 20: L and K = N - 19 are multiples of 10 when N = 99 + 4k... here only the
  // window itself matters for the first series, so use a custom policy list and check structure.
  const auto report = convergence_ratio(s, 99, {{WindowPolicy::Kind::fixed, 20}, {WindowPolicy::Kind::half, 0}});
  EXPECT_EQ(report.n2, 399u);
  EXPECT_EQ(report.cells[1].window1, 50);
  EXPECT_EQ(report.cells[1].window2, 200);
  for (const auto& c : report.cells) {
    if (c.rmse1 <= 1e-12 || c.rmse2 <= 1e-12) EXPECT_FALSE(c.delta.has_value());
    else EXPECT_TRUE(c.delta.has_value());
  }
}

TEST(Convergence, RequiresEnoughReps) {
  auto s = settings_for(SignalKind::damped_cos_wn, 99, Functional::projector, 10);
  EXPECT_THROW(convergence_ratio(s, 99, default_window_policies(2)), Error);
}

TEST(ForecastSplit, NoiseFreeIsZero) {
  auto s = settings_for(SignalKind::damped_cos_wn, 99, Functional::forecast_1step, 3);
  s.signal.sigma = 0.0;
  const auto split = forecast_error_split(s, 30, 50);
  EXPECT_LE(split.total, 1e-8);
  EXPECT_LE(split.lrf_only, 1e-8);
  EXPECT_LE(split.rec_only, 1e-8);
}

TEST(ForecastSplit, TrendsInLrfWindow) {
  auto s = settings_for(SignalKind::damped_cos_wn, 399, Functional::forecast_1step, 200);
  std::vector<ForecastSplit> rows;
  for (Eigen::Index l : {20, 100, 200, 300, 380}) rows.push_back(forecast_error_split(s, l, 200));
  EXPECT_LT(rows.front().lrf_only, rows.back().lrf_only);
  EXPECT_GT(rows.front().rec_only, rows.back().rec_only);
}

TEST(ForecastSplit, LrfPartIndependentOfReconstructionWindow) {
  auto s = settings_for(SignalKind::damped_cos_wn, 399, Functional::forecast_1step, 200);
  const auto a = forecast_error_split(s, 100, 100);
  const auto b = forecast_error_split(s, 100, 200);
  EXPECT_EQ(a.lrf_only, b.lrf_only);
}

TEST(RedNoiseBound, PositiveAndFinite) {
  auto spec = catalog_spec(SignalKind::damped_cos_rn, 400);
  const double bound = red_noise_projector_bound(spec, 10, 2);
  EXPECT_GT(bound, 0.0);
  EXPECT_TRUE(std::isfinite(bound));
}

TEST(Config, ParsesSurfaceAndConvergence) {
  const auto cfg = parse_experiment_config(R"({
    "signal": {"kind": "damped_cos_rn", "N": 120, "b": 1.0},
    "noise": {"kind": "red", "sigma": 0.2, "alpha": 0.3, "seed": 9},
    "windows": {"from": 10, "to": 30, "step": 10},
    "reps": 7, "functional": "projector"})");
  EXPECT_EQ(cfg.kind, ExperimentKind::surface);
  EXPECT_EQ(cfg.settings.windows, (std::vector<Eigen::Index>{10, 20, 30}));
  EXPECT_EQ(cfg.settings.signal.sigma, 0.2);
  EXPECT_EQ(cfg.settings.signal.alpha, 0.3);
  EXPECT_EQ(cfg.settings.seed, 9u);
  EXPECT_EQ(cfg.settings.functional, Functional::projector);

  const auto conv = parse_experiment_config(R"({"experiment": "convergence", "signal": {"kind": "damped_cos_wn"},
    "N1": 399, "reps": 500, "functional": "frequency", "policies": ["r+1", 20, "(N+1)/2"]})");
  EXPECT_EQ(conv.n1, 399u);
  ASSERT_EQ(conv.policies.size(), 3u);
  EXPECT_EQ(conv.policies[0].fixed_window, 3);
  EXPECT_EQ(conv.policies[2].window_for(1599), 800);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_experiment_config("{"), std::exception);
  EXPECT_THROW(parse_experiment_config(R"({"signal": {"kind": "zzz"}, "windows": [5]})"), Error);
  EXPECT_THROW(parse_experiment_config(R"({"signal": {"kind": "damped_cos_wn"}})"), Error);
  EXPECT_THROW(parse_experiment_config(R"({"signal": {"kind": "damped_cos_wn"}, "noise": {"kind": "red"},
    "windows": [5]})"), Error);
}

TEST(Signals, RankDeficientTrajectoryDecomposesCleanly) {
  // Divide-and-conquer SVD returns NaN vectors for this exactly rank-2 trajectory matrix.
  SignalSpec spec;
  spec.kind = SignalKind::custom;
  spec.length = 87;
  spec.sigma = 0.0;
  spec.terms = {{0.71102299536643998, 1.0238832907583704, 0.43325557757554206, 5.880441068947424}};
  const TimeSeries f(signal_values(spec, 87));
  const auto ets = decompose(embed(f, 54));
  ASSERT_EQ(ets.size(), 2u);
  for (const auto& t : ets.triples) {
    EXPECT_TRUE(t.u.allFinite());
    EXPECT_TRUE(t.v.allFinite());
    EXPECT_NEAR(t.u.norm(), 1.0, 1e-12);
  }
  EXPECT_LE((reconstruct_from(ets, {0, 1}).values() - f.values()).cwiseAbs().maxCoeff(), 1e-10);
}
