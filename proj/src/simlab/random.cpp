#include "ssalab/simlab/random.hpp"

#include <cmath>
#include <numbers>

namespace ssalab::simlab {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t hash64(std::uint64_t master_seed, std::uint64_t experiment_id, std::uint64_t rep_index) {
  return mix(mix(mix(master_seed) ^ experiment_id) ^ rep_index);
}

double NormalSource::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd white_noise(NormalSource& rng, Eigen::Index n, double sigma) {
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = sigma * rng.normal();
  return e;
}

Eigen::VectorXd red_noise(NormalSource& rng, Eigen::Index n, double sigma, double alpha) {
  Eigen::VectorXd eta(n);
  if (n == 0) return eta;
  const double innovation = std::sqrt(1.0 - alpha * alpha);
  eta[0] = rng.normal();
  for (Eigen::Index i = 1; i < n; ++i) eta[i] = alpha * eta[i - 1] + innovation * rng.normal();
  return sigma * eta;
}

}  // namespace ssalab::simlab
