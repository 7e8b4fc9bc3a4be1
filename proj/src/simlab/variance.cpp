#include "ssalab/simlab/variance.hpp"

#include "ssalab/error.hpp"

#include <algorithm>
#include <cmath>

namespace ssalab::simlab {

double variance_d1(double beta, double gamma) {
  const double b = beta;
  const double g = gamma;
  const double scale = 12.0 * b * b * (1.0 - b) * (1.0 - b);
  // Linear term is -2 gamma (1 + beta)^2; this matches the exact first-order
  // covariance of the diagonally averaged projection.
  return (g * g * (1.0 + b) - 2.0 * g * (1.0 + b) * (1.0 + b) + 4.0 * b * (3.0 - 3.0 * b + 2.0 * b * b)) / scale;
}

double variance_d2(double beta, double gamma) {
  const double b = beta;
  const double g = gamma;
  const double b2 = b * b;
  const double b3 = b2 * b;
  const double b4 = b3 * b;
  const double b5 = b4 * b;
  const double poly = g * g * g * g + 2.0 * g * g * g * (3.0 * b - 2.0 - 3.0 * b2) +
                      2.0 * g * g * (3.0 - 9.0 * b + 12.0 * b2 - 4.0 * b3) +
                      4.0 * g * (-1.0 + 4.0 * b - 3.0 * b2 - 4.0 * b3 + 4.0 * b4) +
                      (8.0 * b - 56.0 * b2 + 144.0 * b3 - 160.0 * b4 + 64.0 * b5);
  return poly / (6.0 * b2 * (1.0 - b) * (1.0 - b) * g * g);
}

double variance_d3(double beta, double /*gamma*/) { return 2.0 / (3.0 * beta); }

double asymptotic_variance(double beta, double gamma, double sigma, long long n) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::out_of_domain, "beta must lie in (0, 1)");
  if (!(gamma >= 0.0 && gamma <= 2.0)) throw Error(ErrorCode::out_of_domain, "gamma must lie in [0, 2]");
  if (n < 1) throw Error(ErrorCode::out_of_domain, "N must be positive");
  if (!std::isfinite(sigma)) throw Error(ErrorCode::out_of_domain, "sigma must be finite");
  const double b = beta > 0.5 ? 1.0 - beta : beta;
  const double g = gamma > 1.0 ? 2.0 - gamma : gamma;
  double d;
  if (g <= 2.0 * std::min(b, 1.0 - 2.0 * b)) {
    d = variance_d1(b, g);
  } else if (g < 2.0 * b) {
    d = variance_d2(b, g);
  } else {
    d = variance_d3(b, g);
  }
  return sigma * sigma / static_cast<double>(n) * d;
}

}  // namespace ssalab::simlab
