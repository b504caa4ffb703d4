#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "nilsphere/common.hpp"
#include "nilsphere/kernels.hpp"

using namespace nilsphere;

TEST_CASE("band index validity rules") {
    CHECK(BandIndex::low().valid());
    CHECK(BandIndex::band(1, 0).valid());
    CHECK(BandIndex::band(7, 2).valid());
    CHECK_FALSE(BandIndex::band(0, 0).valid());
    CHECK_FALSE(BandIndex::band(6, 2).valid());  // needs 3l < k
    CHECK_FALSE(BandIndex::band(4, -1).valid());
    CHECK(BandIndex::residual(1).valid());
    CHECK_FALSE(BandIndex::residual(0).valid());
    CHECK_THROWS(DyadicKernel(KernelConfig::flat_h1(), BandIndex::band(0, 0)));
}

TEST_CASE("kernel vanishes outside its horizontal and central cutoffs") {
    KernelConfig kc = KernelConfig::flat_h1();
    DyadicKernel K(kc, BandIndex::band(4, 0));
    Eigen::VectorXd x(2), u(1);
    x << 0.46, 0.0;
    u << 0.0;
    CHECK(K.eval(x, u) == 0.0);
    x << 0.2, 0.1;
    u << 0.21;
    CHECK(K.eval(x, u) == 0.0);
    u << 0.0;
    CHECK(K.eval(x, u) != 0.0);
}

TEST_CASE("tabulated kernel matches direct quadrature of its own transform") {
    KernelConfig kc = KernelConfig::flat_h1();
    Rng rng(31);
    for (int k : {3, 5}) {
        DyadicKernel K(kc, BandIndex::band(k, 0));
        double worst = 0.0, mx = 0.0;
        for (int i = 0; i < 25; ++i) {
            Eigen::VectorXd x(2), u(1);
            x << rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4);
            u << rng.uniform(-0.18, 0.18);
            double ev = K.eval(x, u);
            double eq = K.eval_quad(x, u);
            worst = std::max(worst, std::abs(ev - eq));
            mx = std::max(mx, std::abs(eq));
        }
        CAPTURE(k);
        CHECK(worst / mx < 5e-4);
    }
}

TEST_CASE("scale derivative agrees with finite differences of the dilation") {
    KernelConfig kc = KernelConfig::flat_h1();
    Rng rng(32);
    for (int k : {3, 5}) {
        DyadicKernel K(kc, BandIndex::band(k, 0));
        double worst = 0.0, scale = 0.0;
        for (int i = 0; i < 25; ++i) {
            Eigen::VectorXd x(2), u(1);
            x << rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4);
            u << rng.uniform(-0.18, 0.18);
            double sd = K.scale_deriv(x, u);
            double fd = K.scale_deriv_fd(x, u, 1e-4, false);
            worst = std::max(worst, std::abs(sd - fd));
            scale = std::max(scale, std::abs(sd));
        }
        CAPTURE(k);
        REQUIRE(scale > 0.0);
        CHECK(worst <= 1e-5 * scale + 1e-8);
    }
}

TEST_CASE("dilated evaluation is exactly homogeneous") {
    KernelConfig kc = KernelConfig::flat_h1();
    DyadicKernel K(kc, BandIndex::band(5, 0));
    Rng rng(33);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x(2), u(1);
        x << rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3);
        u << rng.uniform(-0.15, 0.15);
        double t = rng.uniform(0.5, 2.0);
        double lhs = K.eval_dilated(t, x, u);
        Eigen::VectorXd xs = x / t, us = u / (t * t);
        double rhs = std::pow(t, -4.0) * K.eval(xs, us);  // Q = d + 2m = 4
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
}

TEST_CASE("frequency-side integral: order stability and mean-ratio identity") {
    KernelConfig kc = KernelConfig::flat_h1();
    DyadicKernel K(kc, BandIndex::band(4, 0));
    double I48 = K.integral(48);
    double I64 = K.integral(64);
    CHECK(std::abs(I48 - I64) / std::abs(I48) < 1e-3);
    double B = K.bump_integral();
    CHECK(B > 0.0);
    CHECK(std::abs(I48 - K.gamma_coefficient(48) * B) < 1e-12);
    // correction subtracts gamma times the bump at the origin
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2), u0 = Eigen::VectorXd::Zero(1);
    double g = K.gamma_coefficient(48);
    CHECK(K.corrected(x0, u0, g) == doctest::Approx(K.eval(x0, u0) - g).epsilon(1e-13));
}

TEST_CASE("size report is stable under lattice oversampling") {
    KernelConfig kc = KernelConfig::flat_h1();
    DyadicKernel K(kc, BandIndex::band(4, 0));
    KernelSizeReport r1 = kernel_size_report(K, 1);
    KernelSizeReport r2 = kernel_size_report(K, 2);
    CHECK(r1.l1 > 0.0);
    CHECK(std::abs(r1.l1 - r2.l1) / r2.l1 < 5e-3);
    CHECK(std::abs(r1.scale_deriv_l1 - r2.scale_deriv_l1) / r2.scale_deriv_l1 < 2e-2);
    CHECK(std::abs(r1.pointwise_c2 - r2.pointwise_c2) / r2.pointwise_c2 < 5e-2);
    CHECK(r2.cells > r1.cells);
    CHECK(r1.max_abs <= r2.max_abs * 1.02);
}

TEST_CASE("low and residual pieces evaluate inside the cutoffs") {
    KernelConfig kc = KernelConfig::flat_h1();
    DyadicKernel KL(kc, BandIndex::low());
    DyadicKernel KR(kc, BandIndex::residual(6));
    Eigen::VectorXd x(2), u(1);
    x << 0.1, 0.05;
    u << 0.02;
    CHECK(std::isfinite(KL.eval(x, u)));
    CHECK(std::isfinite(KR.eval(x, u)));
    CHECK(KL.eval(x, u) != 0.0);
    CHECK(KR.eval(x, u) != 0.0);
}
