#pragma once

#include "ssalab/series.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <vector>

namespace ssalab {

// L x K Hankel matrix of lagged windows; column j holds f_j ... f_{j+L-1}.
class TrajectoryMatrix {
public:
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index window() const noexcept { return matrix_.rows(); }
  Eigen::Index columns() const noexcept { return matrix_.cols(); }

private:
  friend TrajectoryMatrix embed(const TimeSeries&, Eigen::Index);
  explicit TrajectoryMatrix(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
  Eigen::MatrixXd matrix_;
};

enum class DecompositionMethod { basic, toeplitz };

std::string_view to_string(DecompositionMethod method);
DecompositionMethod parse_method(std::string_view text);

struct Eigentriple {
  double sigma = 0.0;
  Eigen::VectorXd u;  // length L, unit norm
  Eigen::VectorXd v;  // length K, unit norm
};

// Ordered eigentriples with sigmas nonincreasing. For the basic method the
// u and v vectors are each orthonormal systems; for the Toeplitz method only
// the u vectors are, sigma_i = |X^T u_i| and v_i = X^T u_i / sigma_i.
//
// Singular values that tie keep the order produced by the backend. Grouping
// indices across such ties is the caller's responsibility.
struct EigentripleSet {
  DecompositionMethod method = DecompositionMethod::basic;
  Eigen::Index window = 0;   // L
  Eigen::Index columns = 0;  // K
  std::vector<Eigentriple> triples;

  std::size_t size() const noexcept { return triples.size(); }
  Eigen::VectorXd sigmas() const;
  // L x count matrix [u_1 : ... : u_count].
  Eigen::MatrixXd left_vectors(std::size_t count) const;
  Eigen::MatrixXd right_vectors(std::size_t count) const;
};

struct DecomposeOptions {
  // Triples with sigma <= relative_cutoff * sigma_1 are dropped.
  double relative_cutoff = 1e-12;
};

// Zero-based eigentriple indices.
using IndexSet = std::vector<std::size_t>;

// Partition of eigentriple indices into disjoint groups.
struct Grouping {
  std::vector<IndexSet> groups;

  // Throws index-out-of-range or invalid-argument on overlap.
  void validate(std::size_t triple_count) const;
};

TrajectoryMatrix embed(const TimeSeries& series, Eigen::Index window);

EigentripleSet decompose(const TrajectoryMatrix& x, const DecomposeOptions& options = {});

// Toeplitz lag-covariance matrix with c_ij = sum_m f_m f_{m+|i-j|} / (N - |i-j|).
Eigen::MatrixXd toeplitz_covariance(const TimeSeries& series, Eigen::Index window);

EigentripleSet decompose_toeplitz(const TimeSeries& series, Eigen::Index window,
                                  const DecomposeOptions& options = {});

// Leading `count` eigentriples of the basic decomposition. Uses block subspace
// iteration on the Hankel operator when count is small relative to min(L, K),
// otherwise the dense decomposition.
EigentripleSet decompose_leading(const TimeSeries& series, Eigen::Index window, std::size_t count,
                                 const DecomposeOptions& options = {});

Eigen::MatrixXd group_matrix(const EigentripleSet& ets, const IndexSet& indices);

// Diagonal averaging: element i is the mean of M(p, q) over p + q = i.
TimeSeries hankelize(const Eigen::MatrixXd& m);

// Diagonal averaging of sum_{i in indices} sigma_i u_i v_i^T without forming the matrix.
TimeSeries reconstruct_from(const EigentripleSet& ets, const IndexSet& indices);

TimeSeries reconstruct(const TimeSeries& series, Eigen::Index window, const IndexSet& indices,
                       DecompositionMethod method = DecompositionMethod::basic,
                       const DecomposeOptions& options = {});

struct Centered {
  TimeSeries series;
  double mean = 0.0;
};

Centered center(const TimeSeries& series);

// Mean squared signal over mean squared residual.
double snr(const TimeSeries& signal, const TimeSeries& residual);

// Flip (u, v) so the largest-magnitude coordinate of u is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> u, Eigen::Ref<Eigen::VectorXd> v);

// Parses "1,2,5-8" (1-based, as eigentriples are numbered) into zero-based indices.
IndexSet parse_index_set(std::string_view text);

}  // namespace ssalab
