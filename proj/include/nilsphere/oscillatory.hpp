#pragma once

#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Dense-matrix measurement of the local oscillatory operator
//   T_lambda f(x) = int e^{i lambda Phi(x,y)} a(x,y) beta_l(x,y) f(y) dy
// on an n = 2 section of the Heisenberg fold phase (the central fiber frozen
// at u = u0, v = 0), where beta_l localizes the mixed Hessian determinant
//   det Phi''_{xy} = -kappa (x_d + u0 y')
// to the dyadic annulus |det| ~ 2^{-l}. The two-sided fold predicts
// ||T_lambda beta_l|| ~ 2^{l/2} lambda^{-n/2} for 2^l < lambda^{1/3}, against
// lambda^{-n/2} with no l-dependence for a nondegenerate phase.
struct OscillatoryPoint {
    double lambda = 0.0;
    int l = 0;
    double norm = 0.0;
    double nyquist_margin = 0.0;   // min over axes of (pi/1.2) / phase step
    double beta_resolution = 0.0;  // beta transition width / det cell step
};

struct OscillatoryResult {
    std::vector<OscillatoryPoint> points;   // fold-phase measurements
    LinearFit lambda_fit;                   // l = 0, log2 norm vs log2 lambda
    LinearFit l_fit;                        // lambda = 256, log2 norm vs l
    PlaneFit fit;                           // joint fit over all points
    std::vector<OscillatoryPoint> control;  // nondegenerate phase
    LinearFit control_fit;                  // log2 norm vs log2 lambda
    double residual_norm = 0.0;             // small-determinant collar at lambda = 128
    double residual_reference = 0.0;        // lambda^{1/6 - n/2} at lambda = 128
    double stability_worst_ratio = 0.0;     // N = 48 vs N = 64 norm ratio spread
};

OscillatoryResult run_oscillatory_experiment(int n_per_axis = 64, int threads = 0);

}  // namespace nilsphere
