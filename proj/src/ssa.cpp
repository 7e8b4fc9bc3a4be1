#include "ssalab/ssa.hpp"

#include "ssalab/error.hpp"

#include "detail/svd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

namespace ssalab {

std::string_view to_string(DecompositionMethod method) {
  return method == DecompositionMethod::basic ? "basic" : "toeplitz";
}

DecompositionMethod parse_method(std::string_view text) {
  if (text == "basic") return DecompositionMethod::basic;
  if (text == "toeplitz") return DecompositionMethod::toeplitz;
  throw Error(ErrorCode::invalid_argument, "unknown decomposition method '" + std::string(text) + "'");
}

Eigen::VectorXd EigentripleSet::sigmas() const {
  Eigen::VectorXd s(static_cast<Eigen::Index>(triples.size()));
  for (std::size_t i = 0; i < triples.size(); ++i) s[static_cast<Eigen::Index>(i)] = triples[i].sigma;
  return s;
}

Eigen::MatrixXd EigentripleSet::left_vectors(std::size_t count) const {
  if (count > triples.size()) {
    throw Error(ErrorCode::rank_too_large, "requested " + std::to_string(count) + " left vectors but only " +
                                               std::to_string(triples.size()) + " triples are retained");
  }
  Eigen::MatrixXd u(window, static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) u.col(static_cast<Eigen::Index>(i)) = triples[i].u;
  return u;
}

Eigen::MatrixXd EigentripleSet::right_vectors(std::size_t count) const {
  if (count > triples.size()) {
    throw Error(ErrorCode::rank_too_large, "requested " + std::to_string(count) + " right vectors but only " +
                                               std::to_string(triples.size()) + " triples are retained");
  }
  Eigen::MatrixXd v(columns, static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) v.col(static_cast<Eigen::Index>(i)) = triples[i].v;
  return v;
}

void Grouping::validate(std::size_t triple_count) const {
  std::vector<bool> seen(triple_count, false);
  for (const auto& group : groups) {
    for (std::size_t idx : group) {
      if (idx >= triple_count) {
        throw Error(ErrorCode::index_out_of_range, "eigentriple index " + std::to_string(idx + 1) +
                                                       " exceeds the " + std::to_string(triple_count) +
                                                       " retained triples");
      }
      if (seen[idx]) {
        throw Error(ErrorCode::invalid_argument,
                    "eigentriple index " + std::to_string(idx + 1) + " appears in more than one group");
      }
      seen[idx] = true;
    }
  }
}

namespace {

void check_window(std::size_t n, Eigen::Index window) {
  if (window < 2 || static_cast<std::size_t>(window) > n - 1 || n < 3) {
    throw Error(ErrorCode::window_out_of_range, "window L=" + std::to_string(window) +
                                                    " must satisfy 2 <= L <= N-1 for N=" + std::to_string(n));
  }
}

void check_indices(const EigentripleSet& ets, const IndexSet& indices) {
  Grouping{{indices}}.validate(ets.size());
}

}  // namespace

TrajectoryMatrix embed(const TimeSeries& series, Eigen::Index window) {
  check_window(series.size(), window);
  const Eigen::Index k = static_cast<Eigen::Index>(series.size()) - window + 1;
  Eigen::MatrixXd x(window, k);
  const auto& f = series.values();
  for (Eigen::Index j = 0; j < k; ++j) x.col(j) = f.segment(j, window);
  return TrajectoryMatrix(std::move(x));
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> u, Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  if (u[imax] < 0) {
    u = -u;
    v = -v;
  }
}

EigentripleSet decompose(const TrajectoryMatrix& x, const DecomposeOptions& options) {
  const auto& m = x.matrix();
  const auto svd = detail::robust_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!svd.ok) {
    throw Error(ErrorCode::decomposition_failed, "SVD of the trajectory matrix did not converge");
  }
  EigentripleSet out;
  out.method = DecompositionMethod::basic;
  out.window = m.rows();
  out.columns = m.cols();
  const auto& s = svd.s;
  if (s.size() == 0 || !(s[0] > 0.0)) return out;
  const double cutoff = options.relative_cutoff * s[0];
  for (Eigen::Index i = 0; i < s.size() && s[i] > cutoff; ++i) {
    Eigentriple t{s[i], svd.u.col(i), svd.v.col(i)};
    normalize_sign(t.u, t.v);
    out.triples.push_back(std::move(t));
  }
  return out;
}

Eigen::MatrixXd toeplitz_covariance(const TimeSeries& series, Eigen::Index window) {
  check_window(series.size(), window);
  const auto& f = series.values();
  const Eigen::Index n = f.size();
  Eigen::VectorXd lag(window);
  for (Eigen::Index k = 0; k < window; ++k) {
    lag[k] = f.head(n - k).dot(f.segment(k, n - k)) / static_cast<double>(n - k);
  }
  Eigen::MatrixXd c(window, window);
  for (Eigen::Index i = 0; i < window; ++i) {
    for (Eigen::Index j = 0; j < window; ++j) c(i, j) = lag[std::abs(i - j)];
  }
  return c;
}

EigentripleSet decompose_toeplitz(const TimeSeries& series, Eigen::Index window,
                                  const DecomposeOptions& options) {
  const Eigen::MatrixXd c = toeplitz_covariance(series, window);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::decomposition_failed, "eigendecomposition of the Toeplitz matrix failed");
  }
  const TrajectoryMatrix x = embed(series, window);
  // Eigenvalues come ascending; visit them descending before sorting by |X^T u|.
  const Eigen::Index l = window;
  std::vector<Eigentriple> triples;
  triples.reserve(static_cast<std::size_t>(l));
  for (Eigen::Index i = l - 1; i >= 0; --i) {
    Eigentriple t;
    t.u = eig.eigenvectors().col(i);
    Eigen::VectorXd xtu = x.matrix().transpose() * t.u;
    t.sigma = xtu.norm();
    t.v = t.sigma > 0.0 ? Eigen::VectorXd(xtu / t.sigma) : Eigen::VectorXd::Zero(xtu.size());
    normalize_sign(t.u, t.v);
    triples.push_back(std::move(t));
  }
  std::stable_sort(triples.begin(), triples.end(),
                   [](const Eigentriple& a, const Eigentriple& b) { return a.sigma > b.sigma; });

  EigentripleSet out;
  out.method = DecompositionMethod::toeplitz;
  out.window = l;
  out.columns = x.columns();
  if (triples.empty() || !(triples.front().sigma > 0.0)) return out;
  const double cutoff = options.relative_cutoff * triples.front().sigma;
  for (auto& t : triples) {
    if (!(t.sigma > cutoff)) break;
    out.triples.push_back(std::move(t));
  }
  return out;
}

Eigen::MatrixXd group_matrix(const EigentripleSet& ets, const IndexSet& indices) {
  check_indices(ets, indices);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ets.window, ets.columns);
  for (std::size_t idx : indices) {
    const auto& t = ets.triples[idx];
    m.noalias() += t.sigma * t.u * t.v.transpose();
  }
  return m;
}

TimeSeries hankelize(const Eigen::MatrixXd& m) {
  const Eigen::Index l = m.rows();
  const Eigen::Index k = m.cols();
  if (l < 1 || k < 1) throw Error(ErrorCode::invalid_argument, "hankelize needs a nonempty matrix");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(l + k - 1);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(l + k - 1);
  for (Eigen::Index q = 0; q < k; ++q) {
    sum.segment(q, l) += m.col(q);
    count.segment(q, l).array() += 1.0;
  }
  return TimeSeries(Eigen::VectorXd(sum.cwiseQuotient(count)));
}

TimeSeries reconstruct_from(const EigentripleSet& ets, const IndexSet& indices) {
  check_indices(ets, indices);
  const Eigen::Index l = ets.window;
  const Eigen::Index k = ets.columns;
  const Eigen::Index n = l + k - 1;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (std::size_t idx : indices) {
    const auto& t = ets.triples[idx];
    const Eigen::VectorXd su = t.sigma * t.u;
    for (Eigen::Index q = 0; q < k; ++q) sum.segment(q, l) += t.v[q] * su;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index count = std::min({i + 1, l, k, n - i});
    sum[i] /= static_cast<double>(count);
  }
  return TimeSeries(std::move(sum));
}

TimeSeries reconstruct(const TimeSeries& series, Eigen::Index window, const IndexSet& indices,
                       DecompositionMethod method, const DecomposeOptions& options) {
  const EigentripleSet ets = method == DecompositionMethod::basic
                                 ? decompose(embed(series, window), options)
                                 : decompose_toeplitz(series, window, options);
  return hankelize(group_matrix(ets, indices));
}

Centered center(const TimeSeries& series) {
  if (series.empty()) return {series, 0.0};
  const double mean = series.values().mean();
  return {TimeSeries(Eigen::VectorXd(series.values().array() - mean)), mean};
}

double snr(const TimeSeries& signal, const TimeSeries& residual) {
  if (signal.size() != residual.size()) {
    throw Error(ErrorCode::dimension_mismatch, "signal and residual lengths differ");
  }
  const double noise = residual.values().squaredNorm();
  if (noise == 0.0) throw Error(ErrorCode::zero_residual, "residual is identically zero");
  return signal.values().squaredNorm() / noise;
}

IndexSet parse_index_set(std::string_view text) {
  IndexSet out;
  auto parse_number = [&](std::string_view token) -> std::size_t {
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || value == 0) {
      throw Error(ErrorCode::invalid_argument, "bad eigentriple index '" + std::string(token) +
                                                   "' (expected 1-based integers like 1,2,5-8)");
    }
    return value;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view token = text.substr(start, comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty()) throw Error(ErrorCode::invalid_argument, "empty entry in group list");
    const std::size_t dash = token.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_number(token) - 1);
    } else {
      const std::size_t lo = parse_number(token.substr(0, dash));
      const std::size_t hi = parse_number(token.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::invalid_argument, "descending range '" + std::string(token) + "'");
      for (std::size_t i = lo; i <= hi; ++i) out.push_back(i - 1);
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace ssalab
