// Acceptance gate for the library's quantitative guarantees. Every criterion
// is one self-contained leg that re-measures the quantity it certifies and
// compares it against tolerances pinned here; each prints exactly one line
//
//   criterion N: PASS|FAIL - <measured numbers> (<wall>s, budget <B>s)
//
// and the process exits nonzero if any executed leg fails. `--only N` runs a
// single criterion (this is how the ctest entries invoke it), `--list` shows
// the catalog. Legs re-derive their inputs from fixed seeds, so reruns are
// byte-stable.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "nilsphere/classify.hpp"
#include "nilsphere/common.hpp"
#include "nilsphere/cotlar.hpp"
#include "nilsphere/fold.hpp"
#include "nilsphere/group.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/oscillatory.hpp"
#include "nilsphere/sharpness.hpp"
#include "nilsphere/slice_ops.hpp"
#include "nilsphere/stationary.hpp"
#include "nilsphere/surface.hpp"

namespace {

using namespace nilsphere;

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

// ---------------------------------------------------------------- criterion 1
// Assembled 8x8 skew form of the companion family has determinant
// (mu1^4 + mu2^4)^2 for every parameter value.
bool crit_determinant(std::string& detail) {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::Vector2d mu(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        AppendixDeterminant ad = appendix_determinant(mu);
        double rel = std::abs(ad.det_assembled - ad.det_formula) /
                     std::max(1.0, std::abs(ad.det_formula));
        worst = std::max(worst, rel);
    }
    detail = fmt("1000 parameter draws, worst determinant mismatch %.2e (tol 1e-9)", worst);
    return worst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 2
// Exact certificate that no linear identification matches the companion
// determinant profile to the isotropic one: the coefficient equations reduce
// to {4 rho = 0, 4 rho^2 + 2 = 0}, infeasible over R, and the numeric floor
// of the residual system over the admissible torus is >= 2.
bool crit_certificate(std::string& detail) {
    CertificateRecord c = non_isomorphism_certificate(720);
    bool ok = c.reduction_matches && c.infeasible && c.numeric_floor >= 2.0 - 1e-9 &&
              c.control_floor <= 1e-9;
    detail = fmt(
        "reduced system {4 rho = 0, 4 rho^2 + 2 = 0} %s, infeasibility %s, "
        "numeric floor %.6f (>= 2), attainable control floor %.1e",
        c.reduction_matches ? "matched exactly" : "MISMATCH",
        c.infeasible ? "verified exactly" : "NOT verified", c.numeric_floor, c.control_floor);
    return ok;
}

// ---------------------------------------------------------------- criterion 3
// Resolvent bounds for sigma A + S with A positive definite and S skew:
// ||(sigma A + S)^{-1}|| <= |sigma|^{-1} ||A^{-1}|| always, and
// <= 2 ||S^{-1}|| once |sigma| <= (2 ||A|| ||S^{-1}||)^{-1}.
bool crit_resolvent(std::string& detail) {
    Rng rng(307);
    int fail_a = 0, fail_b = 0, regime = 0;
    auto random_spd = [&](int n) {
        Eigen::MatrixXd g(n, n);
        for (int r = 0; r < n; ++r)
            for (int col = 0; col < n; ++col) g(r, col) = rng.normal();
        return Eigen::MatrixXd(g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
    };
    auto random_skew = [&](int n) {
        Eigen::MatrixXd h(n, n);
        for (int r = 0; r < n; ++r)
            for (int col = 0; col < n; ++col) h(r, col) = rng.normal();
        return Eigen::MatrixXd(0.5 * (h - h.transpose()));
    };
    for (int i = 0; i < 1000; ++i) {
        const bool force_regime = i >= 500;
        const int n = force_regime ? 2 * rng.uniform_int(1, 4) : rng.uniform_int(2, 8);
        Eigen::MatrixXd a = random_spd(n);
        Eigen::MatrixXd s = random_skew(n);
        const double a_max = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a)
                                 .eigenvalues()
                                 .maxCoeff();
        const double s_min =
            Eigen::JacobiSVD<Eigen::MatrixXd>(s).singularValues().minCoeff();
        double sigma;
        if (force_regime && s_min > 1e-10) {
            const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
            sigma = sgn * rng.uniform(0.05, 0.95) * s_min / (2.0 * a_max);
        } else {
            const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
            sigma = sgn * rng.uniform(0.05, 2.0);
        }
        if (s_min > 1e-10 && std::abs(sigma) <= s_min / (2.0 * a_max)) ++regime;
        SkewResolventCheck chk = check_skew_resolvent(a, s, sigma);
        fail_a += !chk.part_a;
        fail_b += !chk.part_b;
    }
    detail = fmt("1000 trials (dims 2..8): %d first-bound failures, %d small-sigma failures, "
                 "%d trials inside the small-sigma regime (need >= 300)",
                 fail_a, fail_b, regime);
    return fail_a == 0 && fail_b == 0 && regime >= 300;
}

// ---------------------------------------------------------------- criterion 4
// Double-root structure of det(sigma A + S) for skew S of odd dimension:
// subtracting sigma <Ae, e> det(Q^t (sigma A + S) Q) removes the first two
// orders at sigma = 0.
bool crit_double_root(std::string& detail) {
    Rng rng(509);
    double worst_p0 = 0.0, worst_dp0 = 0.0;
    int count = 0;
    for (int rep = 0; rep < 35; ++rep) {
        for (int n : {3, 5, 7}) {
            Eigen::MatrixXd g(n, n), h(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    g(r, c) = rng.normal();
                    h(r, c) = rng.normal();
                }
            Eigen::MatrixXd a = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd s = 0.5 * (h - h.transpose());
            DoubleRootCheck chk = check_double_root(a, s, 1e-3);
            worst_p0 = std::max(worst_p0, chk.p0 / chk.scale);
            worst_dp0 = std::max(worst_dp0, chk.dp0_fd / chk.scale);
            ++count;
        }
    }
    detail = fmt("%d instances over dims {3,5,7}: worst |p(0)|/scale %.2e (tol 1e-6), "
                 "worst |p'(0)|/scale %.2e (tol 1e-4)",
                 count, worst_p0, worst_dp0);
    return worst_p0 <= 1e-6 && worst_dp0 <= 1e-4;
}

// ---------------------------------------------------------------- criterion 5
// Rotation-kernel direction under perturbation: for skew M = P J_u P^t + E(B)
// with ||B|| <= c0 / (8 C0), the kernel stays one-dimensional with central
// component >= c0/2 and the smallest nonzero singular value stays >= c0/2
// (both normalized by |u|).
bool crit_kernel_direction(std::string& detail) {
    Rng rng(1201);
    std::string parts;
    bool ok = true;
    for (const StepTwoGroup& g : {heisenberg_group(1), appendix_group()}) {
        const auto cc = g.nondegeneracy_constants();
        const double bound = cc.c0 / (8.0 * cc.C0);
        double min_comp = 1e300, min_sigma = 1e300;
        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXd u(g.m());
            for (int j = 0; j < g.m(); ++j) u[j] = rng.normal();
            u *= rng.uniform(0.3, 1.5) / u.norm();
            Eigen::VectorXd b(g.d() - 1);
            for (int j = 0; j < g.d() - 1; ++j) b[j] = rng.normal();
            b *= rng.uniform(0.0, 0.999) * bound / std::max(b.norm(), 1e-300);
            KernelDirectionCheck chk = check_kernel_direction(g, u, b);
            min_comp = std::min(min_comp, chk.kernel_component);
            if (g.d() > 2) min_sigma = std::min(min_sigma, chk.smallest_nonzero);
        }
        bool grp_ok = min_comp >= 0.999 * 0.5 * cc.c0;
        if (g.d() > 2) grp_ok = grp_ok && min_sigma >= 0.5 * cc.c0;
        ok = ok && grp_ok;
        parts += fmt("%s%s: min central component %.4f (>= %.4f)", parts.empty() ? "" : "; ",
                     g.label().c_str(), min_comp, 0.5 * cc.c0);
        if (g.d() > 2)
            parts += fmt(", min nonzero singular value %.4f (>= %.4f)", min_sigma, 0.5 * cc.c0);
    }
    detail = "100 perturbed instances per group - " + parts;
    return ok;
}

// ---------------------------------------------------------------- criterion 6
// Mixed Hessian of the reduced phase: the factored closed form agrees with
// the assembled determinant, and the assembled matrix agrees with finite
// differences of the phase itself.
bool crit_mixed_hessian(std::string& detail) {
    StepTwoGroup h1 = heisenberg_group(1);
    Surface surf{};  // paraboloid with unit curvature
    FoldConfig fc(h1, surf, Eigen::MatrixXd::Zero(1, 2));
    Rng rng(1901);
    auto random_point = [&]() {
        PhasePoint p;
        p.x = Eigen::VectorXd(2);
        p.y = Eigen::VectorXd(2);
        p.u = Eigen::VectorXd(1);
        p.v = Eigen::VectorXd(1);
        p.x << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
        p.y << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
        double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
        p.u << sgn * rng.uniform(0.4, 1.0);
        p.v << rng.uniform(-0.3, 0.3);
        return p;
    };
    double worst_factor = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 50; ++i) {
        HessianCheck hc = check_mixed_hessian(fc, random_point());
        worst_factor = std::max(worst_factor, hc.factor_rel_err);
        worst_fd = std::max(worst_fd, hc.fd_max_rel_err);
    }
    detail = fmt("50 base points: worst closed-form mismatch %.2e (tol 1e-9), "
                 "worst finite-difference mismatch %.2e (tol 1e-4)",
                 worst_factor, worst_fd);
    return worst_factor <= 1e-9 && worst_fd <= 1e-4;
}

// ---------------------------------------------------------------- criterion 7
// Fold geometry: at points where the scalar symbol vanishes the mixed Hessian
// has corank exactly one with transversal movement of its determinant in both
// variable groups, and the central pairing driving this degenerates to zero
// when the twist matrices are removed.
bool crit_fold_points(std::string& detail) {
    StepTwoGroup h1 = heisenberg_group(1);
    Surface surf{};  // paraboloid with unit curvature
    FoldConfig fc(h1, surf, Eigen::MatrixXd::Zero(1, 2));
    Rng rng(2111);
    auto random_point = [&]() {
        PhasePoint p;
        p.x = Eigen::VectorXd(2);
        p.y = Eigen::VectorXd(2);
        p.u = Eigen::VectorXd(1);
        p.v = Eigen::VectorXd(1);
        p.x << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
        p.y << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
        double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
        p.u << sgn * rng.uniform(0.4, 1.0);
        p.v << rng.uniform(-0.3, 0.3);
        return p;
    };
    double worst_sigma_min = 0.0, min_second = 1e300, min_trans = 1e300;
    for (int i = 0; i < 50; ++i) {
        PhasePoint p = random_point();
        p.x[1] = fold_xd(fc, p);
        FoldPointCheck f = check_fold_point(fc, p);
        worst_sigma_min = std::max(worst_sigma_min, f.sigma_min);
        min_second = std::min(min_second, f.sigma_second);
        min_trans = std::min({min_trans, f.transversal_left, f.transversal_right});
    }
    const double c0 = h1.nondegeneracy_constants().c0;
    StepTwoGroup flat = abelian_group(2, 1);
    double min_pairing = 1e300, control = 0.0;
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd u(1);
        u << (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.4, 1.0);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(1);
        min_pairing = std::min(min_pairing, check_kernel_direction(h1, u, b).kernel_component);
        control = std::max(control, check_kernel_direction(flat, u, b).kernel_component);
    }
    bool ok = worst_sigma_min <= 1e-8 && min_second >= 1e-2 && min_trans >= 1e-2 &&
              min_pairing >= 0.999 * 0.5 * c0 && control <= 1e-12;
    detail = fmt("50 fold points: corank-one gap [%.1e, %.2f], min transversal derivative "
                 "%.3f; central pairing %.3f vs zero-twist control %.1e",
                 worst_sigma_min, min_second, min_trans, min_pairing, control);
    return ok;
}

// ---------------------------------------------------------------- criterion 8
// Oscillatory-integral scaling on a dense two-dimensional section of the fold
// phase: operator norms scale like lambda^{-1} with a 2^{l/2} band loss, and
// the nondegenerate control shows pure lambda^{-1} with no band loss.
bool crit_oscillatory(std::string& detail) {
    OscillatoryResult r = run_oscillatory_experiment(64);
    double min_nyquist = 1e300, min_beta = 1e300;
    for (const auto& p : r.points) {
        min_nyquist = std::min(min_nyquist, p.nyquist_margin);
        min_beta = std::min(min_beta, p.beta_resolution);
    }
    bool ok = r.lambda_fit.slope >= -1.3 && r.lambda_fit.slope <= -0.7 &&
              r.l_fit.slope >= 0.2 && r.l_fit.slope <= 0.8 &&
              r.control_fit.slope >= -1.3 && r.control_fit.slope <= -0.7 &&
              r.stability_worst_ratio <= 1.05 && min_nyquist >= 1.0 && min_beta >= 1.0;
    detail = fmt("lambda exponent %.3f (in -1 +/- 0.3), band exponent %.3f (in 0.5 +/- 0.3), "
                 "control exponent %.3f, resolution margins ok=%d",
                 r.lambda_fit.slope, r.l_fit.slope, r.control_fit.slope,
                 int(min_nyquist >= 1.0 && min_beta >= 1.0 && r.stability_worst_ratio <= 1.05));
    return ok;
}

// ---------------------------------------------------------------- criterion 9
// Stationary-phase expansion of the fiber integral at exactly-quadratic base
// points: one-term error decays at least like lambda^{-0.7} on every window
// band, reduced quadrature matches the full 4-d tensor rule, and the
// frozen-quadratic control reproduces the exact prefactor.
bool crit_stationary(std::string& detail) {
    StationaryResult r = run_stationary_experiment();
    bool ok = r.theta_det_err <= 1e-12 && r.theta_signature == 0 && r.plateau_error <= 1e-3;
    double worst_slope = -1e300, worst_brute = 0.0;
    for (const auto& c : r.cases) {
        worst_slope = std::max(worst_slope, c.err0_fit.slope);
        worst_brute = std::max(worst_brute, c.brute_rel_err);
        ok = ok && c.window_at_crit > 0.0;
    }
    ok = ok && worst_slope <= -0.7 && worst_brute <= 1e-4;
    detail = fmt("%zu window bands: worst one-term error exponent %.3f (<= -0.7), worst "
                 "reduced-vs-full quadrature gap %.1e, exact-prefactor control error %.1e",
                 r.cases.size(), worst_slope, worst_brute, r.plateau_error);
    return ok;
}

// --------------------------------------------------------------- criterion 10
// Windowed twisted operator norms of the dyadic band pieces: decay in k along
// the principal column, growth in l along the largest-k column, and growth of
// the scale-derivative family measured with full-support windows.
bool crit_decay_slopes(std::string& detail) {
    KernelConfig kc = KernelConfig::flat_h1(1.0);
    auto log2_norm = [&](int k, int l, bool sderiv) {
        return log2_safe(band_operator_norm(kc, k, l, sderiv).norm);
    };
    std::vector<double> ks, ky;
    for (int k = 3; k <= 7; ++k) {
        ks.push_back(k);
        ky.push_back(log2_norm(k, 0, false));
    }
    const double k_slope = fit_line(ks, ky).slope;
    const double k_slope_upper =
        fit_line({4, 5, 6, 7}, std::vector<double>(ky.begin() + 1, ky.end())).slope;

    std::vector<double> ls = {0.0, 1.0, 2.0};
    std::vector<double> ly = {ky.back(), log2_norm(7, 1, false), log2_norm(7, 2, false)};
    const double l_slope = fit_line(ls, ly).slope;

    std::vector<double> ss, sy;
    for (int k = 3; k <= 5; ++k) {
        ss.push_back(k);
        sy.push_back(log2_norm(k, 0, true));
    }
    const double s_slope = fit_line(ss, sy).slope;

    bool ok = k_slope >= -0.8 && k_slope <= -0.2 && l_slope >= 0.2 && l_slope <= 0.8 &&
              s_slope >= 0.2 && s_slope <= 0.8;
    detail = fmt("k exponent %.3f over k=3..7 (need -0.5 +/- 0.3; upper subrange k=4..7 "
                 "gives %.3f), l exponent %.3f at k=7 (need +0.5 +/- 0.3), scale-derivative "
                 "exponent %.3f over k=3..5 (need +0.5 +/- 0.3)",
                 k_slope, k_slope_upper, l_slope, s_slope);
    return ok;
}

// --------------------------------------------------------------- criterion 11
// Almost-orthogonality across scales: the composed operator T_{2^delta} T_1^*
// of corrected band kernels decays geometrically in the dyadic gap delta.
bool crit_cross_scale(std::string& detail) {
    KernelConfig kc = KernelConfig::flat_h1(1.0);
    std::vector<double> ds, dn;
    for (int delta = 0; delta <= 3; ++delta) {
        SliceNormResult r = composed_pair_norm(kc, 3, delta);
        ds.push_back(delta);
        dn.push_back(log2_safe(r.norm));
    }
    const double slope = fit_line(ds, dn).slope;
    detail = fmt("composed-pair norms at gaps 0..3 with log2 slope %.3f (<= -0.7)", slope);
    return slope <= -0.7;
}

// --------------------------------------------------------------- criterion 12
// Square-function almost-orthogonality bound: families satisfying the
// norm and cross-decay hypotheses obey the summed bound with the explicit
// geometric constant, for banded and dense random families alike.
bool crit_cotlar(std::string& detail) {
    Rng rng(11);
    int fails = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        OperatorFamily fam = make_banded_family(rng, 48, 9, 2, 1.0 + rng.uniform());
        CotlarCheck c = cotlar_check(fam, rng);
        fails += !(c.hypotheses_ok && c.pass);
        worst = std::max(worst, c.worst_ratio);
    }
    for (int i = 0; i < 50; ++i) {
        OperatorFamily fam = make_random_family(rng, 24, 6);
        CotlarCheck c = cotlar_check(fam, rng);
        fails += !(c.hypotheses_ok && c.pass);
        worst = std::max(worst, c.worst_ratio);
    }
    detail = fmt("100 operator families (50 banded, 50 dense): %d bound failures, worst "
                 "lhs/rhs ratio %.3f (< 1)",
                 fails, worst);
    return fails == 0;
}

// --------------------------------------------------------------- criterion 13
// Size stability of the band kernel family: L1 mass uniform in k, scale
// derivative growing like 2^k, and a single constant serving the two-factor
// pointwise envelope across the whole family.
bool crit_kernel_sizes(std::string& detail) {
    KernelConfig kc = KernelConfig::flat_h1(1.0);
    std::vector<double> ks, l1s, sds, pcs;
    for (int k = 4; k <= 8; ++k) {
        DyadicKernel K(kc, BandIndex::band(k, 0));
        KernelSizeReport r = kernel_size_report(K, 1);
        ks.push_back(k);
        l1s.push_back(r.l1);
        sds.push_back(log2_safe(r.scale_deriv_l1));
        pcs.push_back(r.pointwise_c2);
    }
    const double l1_ratio = *std::max_element(l1s.begin(), l1s.end()) /
                            *std::min_element(l1s.begin(), l1s.end());
    const double sd_slope = fit_line(ks, sds).slope;
    const double pc_ratio = *std::max_element(pcs.begin(), pcs.end()) /
                            *std::min_element(pcs.begin(), pcs.end());
    bool ok = l1_ratio < 5.0 && sd_slope >= 0.6 && sd_slope <= 1.4 && pc_ratio < 5.0;
    detail = fmt("k=4..8: L1 mass max/min %.3f (< 5), scale-derivative log2 slope %.3f "
                 "(in 1 +/- 0.4), pointwise-envelope constant max/min %.3f (< 5)",
                 l1_ratio, sd_slope, pc_ratio);
    return ok;
}

// --------------------------------------------------------------- criterion 14
// Cancellation coefficients: gamma_k decays at least like 2^{-3k}, and the
// corrected kernel K - gamma b integrates to zero within 1e-9 of the L1 mass.
bool crit_cancellation(std::string& detail) {
    KernelConfig kc = KernelConfig::flat_h1(1.0);
    std::vector<double> ks, gs;
    double worst_int = 0.0;
    for (int k = 4; k <= 8; ++k) {
        DyadicKernel K(kc, BandIndex::band(k, 0));
        const double gamma = K.gamma_coefficient(48);
        const double integral = K.integral(48);
        const double bump = K.bump_integral();
        const double l1 = kernel_size_report(K, 1).l1;
        worst_int = std::max(worst_int, std::abs(integral - gamma * bump) / (1e-9 * l1));
        ks.push_back(k);
        gs.push_back(log2_safe(std::abs(gamma)));
    }
    const double g_slope = fit_line(ks, gs).slope;
    detail = fmt("k=4..8: cancellation coefficient log2 slope %.2f (<= -3), worst corrected "
                 "integral %.2e in units of 1e-9 * L1 mass (<= 1)",
                 g_slope, worst_int);
    return g_slope <= -3.0 && worst_int <= 1.0;
}

// --------------------------------------------------------------- criterion 15
// Endpoint profile: its dyadic shell sums converge (the profile lies in the
// critical Lebesgue space), yet the probe maximal averages of its truncations
// grow without bound - at least half a doubling per truncation level.
bool crit_endpoint(std::string& detail) {
    ShellTable st = stein_lp_profile(2, 2.0, 3, 14);
    double worst_closed = 0.0;
    for (const ShellRow& r : st.rows)
        if (std::isfinite(r.closed_form) && r.closed_form > 0.0)
            worst_closed =
                std::max(worst_closed, std::abs(r.integral - r.closed_form) / r.closed_form);
    BlowupTable bt = blowup_experiment(4, 8);
    bool ok = st.convergent && worst_closed <= 1e-6 && bt.monotone && bt.growth >= 0.5 &&
              bt.lp_bound < 2.0;
    detail = fmt("shell sums convergent=%d (closed-form gap %.1e), probe averages monotone=%d "
                 "with %.3f doublings/level (>= 0.5) while truncated norms stay <= %.3f",
                 int(st.convergent), worst_closed, int(bt.monotone), bt.growth, bt.lp_bound);
    return ok;
}

// --------------------------------------------------------------- criterion 16
// Group arithmetic invariants: associativity, inverses, dilation
// homomorphism on four named groups, and rotation-conjugation invariance of
// the nondegeneracy constants, all to 1e-10.
bool crit_group_axioms(std::string& detail) {
    Rng rng(31);
    double worst = 0.0;
    auto elem_gap = [](const GroupElement& a, const GroupElement& b) {
        return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.u - b.u).cwiseAbs().maxCoeff());
    };
    const std::vector<StepTwoGroup> groups = {heisenberg_group(1), heisenberg_group(2),
                                              appendix_group(), quaternionic_group()};
    for (const StepTwoGroup& g : groups) {
        auto random_elem = [&]() {
            GroupElement e;
            e.x = Eigen::VectorXd(g.d());
            e.u = Eigen::VectorXd(g.m());
            for (int i = 0; i < g.d(); ++i) e.x[i] = rng.uniform(-1.5, 1.5);
            for (int i = 0; i < g.m(); ++i) e.u[i] = rng.uniform(-1.5, 1.5);
            return e;
        };
        for (int i = 0; i < 1000; ++i) {
            GroupElement a = random_elem(), b = random_elem(), c = random_elem();
            worst = std::max(worst, elem_gap(g.multiply(g.multiply(a, b), c),
                                             g.multiply(a, g.multiply(b, c))));
            worst = std::max(worst, elem_gap(g.multiply(a, g.inverse(a)), g.identity()));
            const double t = rng.uniform(0.3, 2.0);
            worst = std::max(worst, elem_gap(g.multiply(g.dilate(t, a), g.dilate(t, b)),
                                             g.dilate(t, g.multiply(a, b))));
        }
    }
    StepTwoGroup h1 = heisenberg_group(1);
    const auto base = h1.nondegeneracy_constants();
    double worst_const = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double th = rng.uniform(0.0, 2.0 * pi);
        Eigen::MatrixXd q(2, 2);
        if (rng.uniform() < 0.5)
            q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        else
            q << std::cos(th), std::sin(th), std::sin(th), -std::cos(th);
        const auto cc = h1.conjugate_by_rotation(q).nondegeneracy_constants();
        worst_const = std::max({worst_const, std::abs(cc.c0 - base.c0),
                                std::abs(cc.C0 - base.C0)});
    }
    detail = fmt("4 groups x 1000 trials: worst axiom violation %.1e (tol 1e-10); "
                 "rotation drift of the nondegeneracy constants %.1e (tol 1e-10)",
                 worst, worst_const);
    return worst <= 1e-10 && worst_const <= 1e-10;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "companion family determinant identity", 1.0, crit_determinant},
    {2, "non-identification certificate", 10.0, crit_certificate},
    {3, "skew resolvent bounds", 5.0, crit_resolvent},
    {4, "double-root structure of the pencil determinant", 5.0, crit_double_root},
    {5, "perturbed rotation-kernel direction", 10.0, crit_kernel_direction},
    {6, "mixed Hessian factorization", 10.0, crit_mixed_hessian},
    {7, "fold-point geometry with zero-twist control", 30.0, crit_fold_points},
    {8, "oscillatory operator scaling", 300.0, crit_oscillatory},
    {9, "stationary-phase expansion", 300.0, crit_stationary},
    {10, "band operator norm slopes", 600.0, crit_decay_slopes},
    {11, "cross-scale almost orthogonality", 300.0, crit_cross_scale},
    {12, "square-function orthogonality bound", 30.0, crit_cotlar},
    {13, "kernel family size stability", 120.0, crit_kernel_sizes},
    {14, "cancellation coefficients", 60.0, crit_cancellation},
    {15, "endpoint convergence against probe blowup", 120.0, crit_endpoint},
    {16, "group arithmetic invariants", 5.0, crit_group_axioms},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (!std::strcmp(argv[i], "--list")) {
            for (const Criterion& c : kCriteria)
                std::printf("%2d  %s (budget %gs)\n", c.id, c.title, c.budget_seconds);
            return 0;
        } else {
            std::fprintf(stderr, "usage: %s [--only N] [--list]\n", argv[0]);
            return 2;
        }
    }
    if (only != 0 && (only < 1 || only > 16)) {
        std::fprintf(stderr, "criterion id must be 1..16\n");
        return 2;
    }
    int failures = 0, executed = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = fmt("exception: %s", e.what());
        }
        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        if (wall > c.budget_seconds) {
            ok = false;
            detail += fmt("; RUNTIME over budget");
        }
        std::printf("criterion %d: %s - %s (%.1fs, budget %gs)\n", c.id,
                    ok ? "PASS" : "FAIL", detail.c_str(), wall, c.budget_seconds);
        std::fflush(stdout);
        failures += !ok;
        ++executed;
    }
    if (executed == 0) {
        std::fprintf(stderr, "no criterion selected\n");
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
