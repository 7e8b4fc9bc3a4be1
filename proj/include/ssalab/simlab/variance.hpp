#pragma once

namespace ssalab::simlab {

// Branch functions of the first-order reconstruction variance for a constant
// signal in white noise, canonical region 0 < beta <= 1/2, 0 <= gamma <= 1.
double variance_d1(double beta, double gamma);
double variance_d2(double beta, double gamma);
double variance_d3(double beta, double gamma);

// Asymptotic variance of the first-order reconstruction error at point l ~ gamma N / 2
// for window L ~ beta N: (sigma^2 / N) * D(beta, gamma). Arguments outside the
// canonical region are mapped through beta -> 1 - beta and gamma -> 2 - gamma.
// Throws out-of-domain unless 0 < beta < 1, 0 <= gamma <= 2, N >= 1.
double asymptotic_variance(double beta, double gamma, double sigma, long long n);

}  // namespace ssalab::simlab
