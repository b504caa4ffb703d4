#pragma once

#include <Eigen/Dense>

#include "nilsphere/common.hpp"
#include "nilsphere/group.hpp"
#include "nilsphere/surface.hpp"

namespace nilsphere {

// Phase geometry of the convolution kernel written as an oscillatory
// integral: after Fourier-expanding both delta constraints, the full phase in
// the frequency-and-auxiliary variables theta = (z, w, tau, sigma) separates
// as
//
//   Psi(theta) = z alpha(sigma, tau) + w . (tau - u) + sigma g0 + tau . h0,
//
// with alpha = sigma + sum_i tau_i (e_d^t J_i y + Lambda_{id}) - x_d. The
// theta-Hessian is a fixed block-antidiagonal pairing matrix of determinant
// (-1)^{m+1} and signature 0, so stationary phase in theta carries the exact
// prefactor (2 pi / lambda)^{m+1}, and the reduced phase Phi(x,u,y,v) is the
// critical value computed here in closed form.
struct FoldConfig {
    StepTwoGroup group;
    Surface surface;
    Eigen::MatrixXd Lambda;  // m x d vertical tilt of the surface measure

    FoldConfig(StepTwoGroup g, Surface s, Eigen::MatrixXd L)
        : group(std::move(g)), surface(s), Lambda(std::move(L)) {}
    int d() const { return group.d(); }
    int m() const { return group.m(); }
};

struct PhasePoint {
    Eigen::VectorXd x, u, y, v;  // dims d, m, d, m
};

struct CriticalTheta {
    double z = 0.0;
    Eigen::VectorXd w, tau;
    double sigma = 0.0;
};

double fold_phase(const FoldConfig& fc, const PhasePoint& p, double z,
                  const Eigen::VectorXd& w, const Eigen::VectorXd& tau,
                  double sigma);
CriticalTheta critical_theta(const FoldConfig& fc, const PhasePoint& p);
double critical_value(const FoldConfig& fc, const PhasePoint& p);  // Phi
double sigma_cr(const FoldConfig& fc, const PhasePoint& p);

// theta ordered (z, w_1..w_m, tau_1..tau_m, sigma); constant in theta.
Eigen::MatrixXd theta_hessian(const FoldConfig& fc, const PhasePoint& p);
struct ThetaHessianInvariants {
    double det = 0.0;
    int signature = 0;
};
ThetaHessianInvariants theta_hessian_invariants(const Eigen::MatrixXd& h);

// Mixed Hessian of Phi: rows (x', x_d, u), columns (y', y_d, v). After
// eliminating the -1 and -I_m diagonal blocks its determinant collapses to
//   det H = (-1)^{m+1} det(sigma_cr Gamma'' + P J_u P^t + E(B)),
// with B = grad Gamma(x'-y') and E(B) = B e_d^t J_u P^t + P J_u e_d B^t.
Eigen::MatrixXd mixed_hessian(const FoldConfig& fc, const PhasePoint& p);
double mixed_hessian_det_factored(const FoldConfig& fc, const PhasePoint& p);

// Auxiliary first-order symbol entering the size estimates of the band
// decomposition (vanishes to order 2^{-l} + ||Lambda|| at the critical point).
double rho_value(const FoldConfig& fc, const PhasePoint& p, double sigma,
                 const Eigen::VectorXd& tau);

struct HessianCheck {
    double factor_rel_err = 0.0;  // assembled det vs factored closed form
    double fd_max_rel_err = 0.0;  // entries vs finite differences of Phi
};
HessianCheck check_mixed_hessian(const FoldConfig& fc, const PhasePoint& p,
                                 double fd_step = 3e-4);

// Fold geometry at a point with sigma_cr = 0: rank d+m-1, kernel directions,
// and transversal derivatives of det H along them.
struct FoldPointCheck {
    double sigma_min = 0.0, sigma_second = 0.0, sigma_max = 0.0;
    double transversal_left = 0.0;   // |d det H / d(y,v) . V_L|
    double transversal_right = 0.0;  // |d det H / d(x,u) . V_R|
};
FoldPointCheck check_fold_point(const FoldConfig& fc, const PhasePoint& p);
// x_d making sigma_cr vanish at fixed (x', u, y, v)
double fold_xd(const FoldConfig& fc, const PhasePoint& p);

// Rotation-kernel lemma: for skew M = P J_u P^t + E(B) with small B, the
// central direction W spanning ker M satisfies |e_d^t J_u P^t W| >= c0/2 |u|
// ||W||, and the smallest nonzero singular value of M stays above c0 |u| / 2.
struct KernelDirectionCheck {
    double kernel_component = 0.0;   // |e_d^t J_u P^t W| / (|u| ||W||)
    double smallest_nonzero = 0.0;   // sigma_{d-2}(M) / |u|; -1 when d = 2
};
KernelDirectionCheck check_kernel_direction(const StepTwoGroup& g,
                                            const Eigen::VectorXd& u,
                                            const Eigen::VectorXd& B);

// Resolvent bounds for sigma A + S (A positive definite, S skew):
// ||(sigma A + S)^{-1}|| <= |sigma|^{-1} ||A^{-1}||, and when S is invertible
// and |sigma| <= (2 ||A|| ||S^{-1}||)^{-1} also <= 2 ||S^{-1}||.
struct SkewResolventCheck {
    bool part_a = false;
    bool part_b = false;  // vacuously true when not applicable
};
SkewResolventCheck check_skew_resolvent(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& s, double sigma);

// Double-root structure: for odd dimension, S skew of corank 1 with unit
// kernel e, Q a basis of its complement,
//   p(sigma) = det(sigma A + S) - sigma <A e, e> det(Q^t (sigma A + S) Q)
// vanishes to second order at sigma = 0. Returns |p(0)| and the fourth-order
// finite-difference estimate of |p'(0)| at step h, with a scale reference.
struct DoubleRootCheck {
    double p0 = 0.0;
    double dp0_fd = 0.0;
    double scale = 0.0;
};
DoubleRootCheck check_double_root(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& s, double h);

}  // namespace nilsphere
