#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "nilsphere/bump.hpp"
#include "nilsphere/fft_utils.hpp"
#include "nilsphere/surface.hpp"

namespace nilsphere {

// Geometry entering the localized convolution kernels: the surface patch
// x_d = Gamma(x'), the central tilt u = Lambda x, and the tensor cutoff
// chi(x, u) = zeta0(|x|/rx) zeta0(|u|/ru).
struct KernelConfig {
    int d = 2;
    int m = 1;
    Surface surface{};
    Eigen::MatrixXd Lambda;  // m x d
    double rx = 0.45;
    double ru = 0.2025;

    static KernelConfig flat_h1(double curvature = 1.0, double rx = 0.45);
    double chi_x(const Eigen::VectorXd& x) const;
    double chi_u(const Eigen::VectorXd& u) const;
    // radial log-derivative helpers x . grad chi_x and u . grad chi_u
    double x_dot_grad_chi_x(const Eigen::VectorXd& x) const;
    double u_dot_grad_chi_u(const Eigen::VectorXd& u) const;
};

// Which frequency window the kernel carries.
struct BandIndex {
    enum class Kind { low, band, residual };
    Kind kind = Kind::band;
    int k = 4;
    int l = 0;
    static BandIndex low();
    static BandIndex band(int k, int l);
    static BandIndex residual(int k);
    bool valid() const;  // band: 0 <= l < k/3
};

// One localized frequency-band kernel
//   K(x, u) = chi(x, u) * W(x_d - Gamma(x'), u - Lambda x)
// where W is the (d_sigma x m_tau) inverse transform of the window; for bands
// it inherits the dilation structure W = 2^{k(m+1)} W_shape(2^k a, 2^k b) with
// a k-independent shape table. Table evaluation requires m = 1; the direct
// quadrature paths work for any m = 1 geometry as well (they share the scalar
// central variable).
class DyadicKernel {
public:
    DyadicKernel(KernelConfig cfg, BandIndex band);

    const KernelConfig& config() const { return cfg_; }
    const BandIndex& band() const { return band_; }

    // table-backed evaluation (fast path)
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    // direct 2-d frequency quadrature (oracle path)
    double eval_quad(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    // d/ds [ s^{-(d+2m)} K(x/s, u/s^2) ] at s = 1
    double scale_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    // centered finite difference of the same (oracle route); h ~ 1e-3 / 2^k
    double scale_deriv_fd(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double h,
                          bool use_quad) const;
    // the kernel of the dilated family at time t, t^{-(d+2m)} K(x/t, u/t^2)
    double eval_dilated(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    // integral of K over R^{d+m} through the separated frequency-side
    // quadrature (x-integral cached per sigma node); `order` scales all node
    // counts so refinement gives an independent discretization.
    double integral(int order = 32) const;

    // companion bump b (tensor, = 1 on supp chi) and the cancellation data
    double bump(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    double bump_integral() const;
    double gamma_coefficient(int order = 32) const;  // integral / bump_integral
    // corrected kernel K - gamma b given a precomputed gamma
    double corrected(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double gamma) const;

    // window shape in scaled frequency variables (s, t) = 2^-k (sigma, tau)
    double window_scaled(double s, double t) const;
    // window in absolute frequency variables
    double window_abs(double sigma, double tau) const;
    double band_scale() const;  // 2^k for bands/residual, 1 for low

    const FtTable2& shape_table() const;

private:
    KernelConfig cfg_;
    BandIndex band_;
    std::shared_ptr<const FtTable2> table_;
    double a_of(const Eigen::VectorXd& x) const;  // x_d - Gamma(x')
    double b_of(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
};

// L1-type size report for a kernel family member on a midpoint grid with
// spacing ~ 2^-k-1 over the cutoff support.
struct KernelSizeReport {
    double l1 = 0.0;             // ||K||_1
    double scale_deriv_l1 = 0.0; // ||d/ds K_s|_{s=1}||_1
    double pointwise_c2 = 0.0;   // best constant in the N = 2 envelope bound
    double max_abs = 0.0;
    std::size_t cells = 0;
};
KernelSizeReport kernel_size_report(const DyadicKernel& K, int oversample = 2);

// Central-variable Fourier slice of K at frequency tau (m = 1):
//   Khat(x, tau) = chi_x(x) V(a(x), tau),
// with V and the derivative tables needed by the scaling vector field.
struct SliceTables {
    EvenTable1 V;     // V(a, tau), even in a
    EvenTable1 Va;    // odd in a: stores |a|-profile, eval multiplies sign(a)
    EvenTable1 Vtau;  // d/dtau V, even in a
    double tau = 0.0;
    bool with_derivs = false;

    double v(double a) const { return V.eval(a); }
    double va(double a) const { return Va.eval(a); }  // Va table is odd-aware
    double vtau(double a) const { return Vtau.eval(a); }
};
SliceTables build_slice_tables(const DyadicKernel& K, double tau, double a_max,
                               bool with_derivs);

}  // namespace nilsphere
