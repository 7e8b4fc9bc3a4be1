#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace ssalab::simlab {

// Counter-based seed derivation: same inputs give the same seed on every platform.
std::uint64_t hash64(std::uint64_t master_seed, std::uint64_t experiment_id, std::uint64_t rep_index);

// Deterministic normal generator. The transform is implemented here rather than
// taken from <random> so that streams agree across standard libraries.
class NormalSource {
public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1)
  double normal();   // N(0, 1), Box-Muller

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Eigen::VectorXd white_noise(NormalSource& rng, Eigen::Index n, double sigma);

// Stationary AR(1) with unit variance scaled by sigma: eta_0 ~ N(0, 1),
// eta_n = alpha eta_{n-1} + e_n, Var e_n = 1 - alpha^2.
Eigen::VectorXd red_noise(NormalSource& rng, Eigen::Index n, double sigma, double alpha);

}  // namespace ssalab::simlab
