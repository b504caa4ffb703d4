#pragma once

#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Smooth even cutoff: 1 on |s| <= 1/2, 0 on |s| >= 1, glued with
// exp(1 - 1/(1 - t^2)), t = 2|s| - 1, in between.
double zeta0(double s);
double zeta0_prime(double s);

// Annular cutoff zeta1(s) = zeta0(s/2) - zeta0(s): supported on 1/2 <= |s| <= 2,
// and sum_{j in Z} zeta1(2^-j s) = 1 for s != 0.
double zeta1(double s);
double zeta1_prime(double s);

// Number of intermediate sigma-bands at frequency level k (the l with
// 1 <= l < k/3); the residual sigma-cutoff exponent is tied to this count so
// the level-k bands sum exactly to the annular cutoff.
int sigma_band_count(int k);

// Frequency windows on (sigma, tau) in R x R^m, rho = |(sigma, tau)|:
//   low:        zeta0(rho)
//   band(k,0):  zeta1(2^-k rho) * (1 - zeta0(2^-k sigma))
//   band(k,l):  zeta1(2^-k rho) * zeta1(2^(l-k) sigma),   1 <= l < k/3
//   residual k: zeta1(2^-k rho) * zeta0(2^(Lk - k) sigma), Lk = sigma_band_count(k)
double window_low(double sigma, const std::vector<double>& tau);
double window_band(int k, int l, double sigma, const std::vector<double>& tau);
double window_residual(int k, double sigma, const std::vector<double>& tau);

// low + sum_{k=1..kmax} [band(k,0) + sum_l band(k,l) + residual(k)]; equals 1
// once kmax covers |(sigma,tau)|.
double window_partition_sum(int kmax, double sigma, const std::vector<double>& tau);

}  // namespace nilsphere
