#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "nilsphere/common.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/quadrature.hpp"
#include "nilsphere/slice_ops.hpp"

using namespace nilsphere;

namespace {

SliceField random_field(int n, double h, Rng& rng) {
    SliceField f(n, h);
    for (auto& z : f.v) z = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return f;
}

cd field_inner(const SliceField& a, const SliceField& b) {
    // both fields must share pitch and be centered; compare on the overlap
    const int n = std::min(a.n, b.n);
    const int oa = (a.n - n) / 2, ob = (b.n - n) / 2;
    cd s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += a.at(oa + i, oa + j) * std::conj(b.at(ob + i, ob + j));
    return s * a.h * a.h;
}

}  // namespace

TEST_CASE("adjoint_slice is an involution and conjugate-reflects") {
    Rng rng(61);
    SliceField a = random_field(7, 0.1, rng);
    SliceField aa = adjoint_slice(adjoint_slice(a));
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == aa.v[i]);
    SliceField s = adjoint_slice(a);
    const int c = a.c();
    CHECK(s.at(c + 2, c - 1) == std::conj(a.at(c - 2, c + 1)));
}

TEST_CASE("twisted composition at zero twist is plain convolution") {
    Rng rng(62);
    SliceField a = random_field(5, 0.25, rng);
    SliceField b = random_field(7, 0.25, rng);
    SliceField c = twisted_compose(a, b, 0.0, 11, 1);
    // direct double sum
    const int cA = a.c(), cB = b.c(), cO = c.c();
    for (int i1 = 0; i1 < c.n; ++i1)
        for (int i2 = 0; i2 < c.n; ++i2) {
            cd acc = 0.0;
            for (int j1 = 0; j1 < b.n; ++j1)
                for (int j2 = 0; j2 < b.n; ++j2) {
                    int k1 = (i1 - cO) - (j1 - cB) + cA;
                    int k2 = (i2 - cO) - (j2 - cB) + cA;
                    if (k1 < 0 || k1 >= a.n || k2 < 0 || k2 >= a.n) continue;
                    acc += a.at(k1, k2) * b.at(j1, j2);
                }
            acc *= a.h * a.h;
            CHECK(std::abs(acc - c.at(i1, i2)) < 1e-12);
        }
}

TEST_CASE("twisted composition is associative") {
    Rng rng(63);
    const double h = 0.2, theta = 1.7;
    SliceField a = random_field(5, h, rng);
    SliceField b = random_field(5, h, rng);
    SliceField c = random_field(5, h, rng);
    // out_n large enough to hold the full support of the triple product
    SliceField left = twisted_compose(twisted_compose(a, b, theta, 9, 1), c, theta, 13, 1);
    SliceField right = twisted_compose(a, twisted_compose(b, c, theta, 9, 1), theta, 13, 1);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < left.v.size(); ++i) {
        diff = std::max(diff, std::abs(left.v[i] - right.v[i]));
        scale = std::max(scale, std::abs(left.v[i]));
    }
    CHECK(diff / scale < 1e-13);
}

TEST_CASE("adjoint kernel implements the adjoint of twisted application") {
    Rng rng(64);
    const double h = 0.2, theta = -2.3;
    SliceField k = random_field(5, h, rng);
    SliceField f = random_field(7, h, rng);
    SliceField g = random_field(11, h, rng);
    SliceField kf = twisted_apply(k, f, theta, 11, 1);
    SliceField kg = twisted_apply(adjoint_slice(k), g, theta, 15, 1);
    cd lhs = field_inner(kf, g);
    cd rhs = field_inner(f, kg);
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-12);
}

TEST_CASE("windowed twisted norm matches a dense singular-value oracle") {
    Rng rng(65);
    const double h = 0.3, theta = 1.1;
    const int n_k = 7, n_w = 5;
    SliceField k = random_field(n_k, h, rng);

    // T f(x) = h^2 sum_y k(x-y) f(y) e^{i theta (x1 y2 - x2 y1)}, f supported
    // on the window: the largest singular value of the rectangular matrix
    const int n_out = n_k + n_w - 1;  // reach of the kernel from the window
    const int cK = k.c(), cW = n_w / 2, cO = n_out / 2;
    Eigen::MatrixXcd M(n_out * n_out, n_w * n_w);
    for (int x1 = 0; x1 < n_out; ++x1)
        for (int x2 = 0; x2 < n_out; ++x2)
            for (int y1 = 0; y1 < n_w; ++y1)
                for (int y2 = 0; y2 < n_w; ++y2) {
                    int d1 = (x1 - cO) - (y1 - cW) + cK;
                    int d2 = (x2 - cO) - (y2 - cW) + cK;
                    cd val = 0.0;
                    if (d1 >= 0 && d1 < n_k && d2 >= 0 && d2 < n_k) {
                        double ph = theta * ((x1 - cO) * h * (y2 - cW) * h -
                                             (x2 - cO) * h * (y1 - cW) * h);
                        val = h * h * k.at(d1, d2) * cd(std::cos(ph), std::sin(ph));
                    }
                    M(x1 * n_out + x2, y1 * n_w + y2) = val;
                }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const double oracle = svd.singularValues()(0);

    const double measured = windowed_twisted_norm(k, theta, n_w, 64, 5, 1);
    CHECK(measured == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("kernel slice at zero central frequency matches direct integration") {
    KernelConfig cfg = KernelConfig::flat_h1(1.0);
    const int k = 3;
    DyadicKernel K(cfg, BandIndex::band(k, 0));
    const double h = std::ldexp(1.0, -k - 2);
    const int n = 2 * static_cast<int>(std::ceil(cfg.rx / h)) + 1;
    SliceField s = sample_kernel_slice(K, 0.0, 1.0, h, n, false, 0.0, 1);
    const double scale = s.max_abs();
    REQUIRE(scale > 0.0);
    const int c = s.c();
    for (int i1 = 2; i1 < n; i1 += 5)
        for (int i2 = 1; i2 < n; i2 += 5) {
            Eigen::VectorXd x(2);
            x << (i1 - c) * h, (i2 - c) * h;
            std::function<double(double)> integrand = [&](double u) {
                Eigen::VectorXd uu(1);
                uu << u;
                return K.eval(x, uu);
            };
            double direct = integrate_panels(integrand, -cfg.ru, cfg.ru, 12, 8);
            CHECK(std::abs(direct - s.at(i1, i2).real()) < 5e-3 * scale);
            CHECK(s.at(i1, i2).imag() == 0.0);
        }
}

TEST_CASE("dilated slices follow the automorphism and feed the s-derivative") {
    KernelConfig cfg = KernelConfig::flat_h1(1.0);
    const int k = 3;
    DyadicKernel K(cfg, BandIndex::band(k, 0));
    const double h = std::ldexp(1.0, -k - 2);
    const int n = 2 * static_cast<int>(std::ceil((cfg.rx + 2.0 * h) / h)) + 1;
    const double tau = 3.0;

    SliceField d = sample_kernel_slice_sderiv(K, tau, h, n, 1);
    const double eps = 1e-3;
    SliceField up = sample_kernel_slice(K, tau, 1.0 + eps, h, n, false, 0.0, 1);
    SliceField dn = sample_kernel_slice(K, tau, 1.0 - eps, h, n, false, 0.0, 1);
    const double scale = d.max_abs();
    REQUIRE(scale > 0.0);
    for (std::size_t i = 0; i < d.v.size(); ++i) {
        double fd = (up.v[i].real() - dn.v[i].real()) / (2.0 * eps);
        CHECK(std::abs(fd - d.v[i].real()) < 2e-4 * scale);
    }
}

TEST_CASE("band operator scan reports its samples coherently") {
    KernelConfig cfg = KernelConfig::flat_h1(1.0);
    SliceNormResult r = band_operator_norm(cfg, 3, 0, false, 1.0, 1, 1);
    CHECK(r.samples.size() == 5);
    double best = 0.0, best_tau = 0.0;
    for (const auto& s : r.samples) {
        CHECK(s.value > 0.0);
        if (s.value > best) {
            best = s.value;
            best_tau = s.tau;
        }
    }
    CHECK(r.norm == best);
    CHECK(r.tau_at_max == best_tau);
    // scanned frequencies are fixed multiples of the band scale, covering the
    // low-frequency plateau and the crossing bump on both sides of its peak
    CHECK(r.samples[0].tau == doctest::Approx(0.0625 * 8.0));
    CHECK(r.samples[4].tau == doctest::Approx(1.5 * 8.0));
}
