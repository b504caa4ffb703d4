#pragma once

#include <cstdint>
#include <vector>

#include "nilsphere/common.hpp"
#include "nilsphere/kernels.hpp"

namespace nilsphere {

// Complex field on a square, node-centered lattice with an odd point count,
// so coordinates (i - (n-1)/2) h are symmetric about 0 and closed under
// negation. Slice fields represent partial Fourier transforms K^(x, tau)
// of convolution kernels in the central variable.
struct SliceField {
    int n = 0;  // odd
    double h = 0.0;
    std::vector<cd> v;

    SliceField() = default;
    SliceField(int n_, double h_) : n(n_), h(h_), v(static_cast<std::size_t>(n_) * n_, cd(0.0)) {}
    int c() const { return (n - 1) / 2; }
    double coord(int i) const { return (i - c()) * h; }
    cd& at(int i1, int i2) { return v[static_cast<std::size_t>(i1) * n + i2]; }
    cd at(int i1, int i2) const { return v[static_cast<std::size_t>(i1) * n + i2]; }
    double max_abs() const;
};

// Twisted convolution algebra at symplectic coefficient theta, with
// omega(x, y) = x1 y2 - x2 y1:
//
//   (apply(K) F)(x) = h^2 sum_y K(x - y) F(y) exp(i theta omega(x, y)).
//
// Compositions stay in the algebra: apply(A) o apply(B) = apply(A ** B) with
// (A ** B)(v) = h^2 sum_w A(v - w) B(w) exp(i theta omega(v, w)), and the
// L^2 adjoint of apply(K) is apply(K~), K~(z) = conj K(-z). These exact
// identities drive all windowed norm computations below.
SliceField adjoint_slice(const SliceField& a);
SliceField twisted_compose(const SliceField& a, const SliceField& b, double theta,
                           int out_n, int threads = 0);
SliceField twisted_apply(const SliceField& k, const SliceField& f, double theta,
                         int out_n, int threads = 0);

// || apply(K) P_W || where P_W restricts to the centered window box of
// window_n points per axis. Computed exactly (up to Lanczos convergence) via
// the Gram kernel K~ ** K evaluated on the doubled window box.
double windowed_twisted_norm(const SliceField& k, double theta, int window_n,
                             int lanczos_steps = 36, std::uint64_t seed = 11,
                             int threads = 0);

// Central-variable Fourier slice of the (optionally corrected, optionally
// dilated) kernel, sampled on an n x n lattice of spacing h:
//   K_t^(x, tau) = t^{-2} [K^(x/t, t^2 tau) - gamma_correction].
SliceField sample_kernel_slice(const DyadicKernel& K, double tau, double dilation,
                               double h, int n, bool corrected, double gamma,
                               int threads = 0);
// Slice of the scale derivative d/ds K_s |_{s=1}:
//   -2 K^ - x . grad_x K^ + 2 tau dtau K^.
SliceField sample_kernel_slice_sderiv(const DyadicKernel& K, double tau, double h,
                                      int n, int threads = 0);

struct NormSample {
    double tau = 0.0;
    double value = 0.0;
};
struct SliceNormResult {
    double norm = 0.0;
    double tau_at_max = 0.0;
    std::vector<NormSample> samples;
};

// sup over sampled tau of the windowed twisted operator norm of one dyadic
// band piece (or of its scale derivative). For the plain band the window
// spans a fixed number of wavelengths of the band's oscillation scale
// 2^{k-l}, so the localization bias is uniform across k and slope fits are
// meaningful; for the scale derivative the window covers the full kernel
// support (its x.grad_x part lives at the support edge) and n_waves is
// ignored. The tau scan brackets the observed peak of each admissible row.
SliceNormResult band_operator_norm(const KernelConfig& cfg, int k, int l,
                                   bool sderiv, double j_twist = 1.0,
                                   int n_waves = 3, int threads = 0);

// sup over sampled tau of || T_{2^delta} T_1^* || for the corrected band
// kernel at base scale k, where T_t is convolution by the t-dilated kernel.
// By dilation covariance this depends only on the dyadic gap delta.
SliceNormResult composed_pair_norm(const KernelConfig& cfg, int k, int delta,
                                   double j_twist = 1.0, int threads = 0);

}  // namespace nilsphere
