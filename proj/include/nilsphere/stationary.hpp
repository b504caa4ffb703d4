#pragma once

#include <complex>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Empirical check of the stationary-phase expansion for the fiber integral
//   I(lambda) = int e^{i lambda Psi(theta)} b(theta) dtheta,
// theta = (z, w, tau, sigma), at Heisenberg base points where the phase is
// exactly quadratic with |det Psi''| = 1 and signature 0. The normalized
// value I * (lambda/2pi)^{m+1} e^{-i lambda Phi} is compared against the
// zeroth term b(theta_c) and the two-term expansion with
// E1 = (i/2) sum (Psi''^{-1})_{ab} d^2_{ab} b(theta_c).
struct StationarySample {
    double lambda = 0.0;
    std::complex<double> normalized;  // I * (lambda/2pi)^{m+1} * e^{-i lambda Phi}
    double err0 = 0.0;                // |normalized - E0|
    double err1 = 0.0;                // |normalized - E0 - E1/lambda|
};

struct StationaryCaseResult {
    int l = 0;                     // dyadic sigma-band of the window
    double sigma_c = 0.0;
    double window_at_crit = 0.0;   // eta_l(sigma_c, tau_c)
    std::complex<double> e0, e1;
    std::vector<StationarySample> samples;
    LinearFit err0_fit;            // log2 err0 vs log2 lambda
    LinearFit err1_fit;
    double brute_rel_err = 0.0;    // reduced vs 4-d tensor quadrature, lambda <= 32
};

struct StationaryResult {
    std::vector<StationaryCaseResult> cases;
    double theta_det_err = 0.0;    // | |det Psi''| - 1 |
    int theta_signature = 0;
    double plateau_error = 0.0;    // |normalized - 1| at lambda = 200, flat amplitude
};

StationaryResult run_stationary_experiment(int threads = 0);

}  // namespace nilsphere
