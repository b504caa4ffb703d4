#include "nilsphere/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "nilsphere/quadrature.hpp"

namespace nilsphere {

KernelConfig KernelConfig::flat_h1(double curvature, double rx) {
    KernelConfig c;
    c.d = 2;
    c.m = 1;
    c.surface.kind = Surface::Kind::paraboloid;
    c.surface.curvature = curvature;
    c.Lambda = Eigen::MatrixXd::Zero(1, 2);
    c.rx = rx;
    c.ru = rx * rx;
    return c;
}

double KernelConfig::chi_x(const Eigen::VectorXd& x) const { return zeta0(x.norm() / rx); }

double KernelConfig::chi_u(const Eigen::VectorXd& u) const { return zeta0(u.norm() / ru); }

double KernelConfig::x_dot_grad_chi_x(const Eigen::VectorXd& x) const {
    double r = x.norm();
    if (r < 1e-300) return 0.0;
    return r / rx * zeta0_prime(r / rx);
}

double KernelConfig::u_dot_grad_chi_u(const Eigen::VectorXd& u) const {
    double r = u.norm();
    if (r < 1e-300) return 0.0;
    return r / ru * zeta0_prime(r / ru);
}

BandIndex BandIndex::low() { return {Kind::low, 0, 0}; }
BandIndex BandIndex::band(int k, int l) { return {Kind::band, k, l}; }
BandIndex BandIndex::residual(int k) { return {Kind::residual, k, 0}; }

bool BandIndex::valid() const {
    switch (kind) {
        case Kind::low: return true;
        case Kind::band: return k >= 1 && l >= 0 && (l == 0 || 3 * l < k);
        case Kind::residual: return k >= 1;
    }
    return false;
}

namespace {

struct WindowKey {
    int kind;  // 0 low, 1 band, 2 residual
    int l;     // band index or residual sigma-cutoff level
    bool operator<(const WindowKey& o) const {
        return kind != o.kind ? kind < o.kind : l < o.l;
    }
};

double window_shape(const WindowKey& key, double s, double t) {
    double r = std::hypot(s, t);
    switch (key.kind) {
        case 0: return zeta0(r);
        case 1:
            if (key.l == 0) return zeta1(r) * (1.0 - zeta0(s));
            return zeta1(r) * zeta1(std::ldexp(s, key.l));
        default: return zeta1(r) * zeta0(std::ldexp(s, key.l));
    }
}

std::map<WindowKey, std::shared_ptr<const FtTable2>> g_window_tables;
std::mutex g_window_mutex;

std::shared_ptr<const FtTable2> window_table(const WindowKey& key) {
    std::lock_guard<std::mutex> lock(g_window_mutex);
    auto it = g_window_tables.find(key);
    if (it != g_window_tables.end()) return it->second;
    double pmax, qmax;
    if (key.kind == 0) {
        pmax = qmax = 160.0;
    } else {
        pmax = 120.0 * std::ldexp(1.0, key.l) + 100.0;
        qmax = 170.0;
    }
    auto w = [key](double s, double t) { return window_shape(key, s, t); };
    auto tab = std::make_shared<FtTable2>(build_ft_table2(w, 2.05, 2.05, pmax, qmax, 0.1, 0.1));
    g_window_tables.emplace(key, tab);
    return tab;
}

WindowKey key_of(const BandIndex& b) {
    switch (b.kind) {
        case BandIndex::Kind::low: return {0, 0};
        case BandIndex::Kind::band: return {1, b.l};
        default: return {2, sigma_band_count(b.k)};
    }
}

}  // namespace

DyadicKernel::DyadicKernel(KernelConfig cfg, BandIndex band)
    : cfg_(std::move(cfg)), band_(band) {
    if (!band_.valid()) throw std::invalid_argument("DyadicKernel: invalid band index");
    if (cfg_.m != 1)
        throw std::invalid_argument("DyadicKernel: table evaluation supports m = 1 only");
    if (cfg_.Lambda.rows() != cfg_.m || cfg_.Lambda.cols() != cfg_.d)
        throw std::invalid_argument("DyadicKernel: Lambda must be m x d");
    table_ = window_table(key_of(band_));
}

const FtTable2& DyadicKernel::shape_table() const { return *table_; }

double DyadicKernel::band_scale() const {
    return band_.kind == BandIndex::Kind::low ? 1.0 : std::ldexp(1.0, band_.k);
}

double DyadicKernel::a_of(const Eigen::VectorXd& x) const {
    return x[cfg_.d - 1] - cfg_.surface.gamma(x.head(cfg_.d - 1));
}

double DyadicKernel::b_of(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return u[0] - (cfg_.Lambda * x)(0);
}

double DyadicKernel::window_scaled(double s, double t) const {
    return window_shape(key_of(band_), s, t);
}

double DyadicKernel::window_abs(double sigma, double tau) const {
    double sc = band_scale();
    return window_scaled(sigma / sc, tau / sc);
}

double DyadicKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    double chi = cfg_.chi_x(x) * cfg_.chi_u(u);
    if (chi == 0.0) return 0.0;
    double sc = band_scale();
    double scale_pow = std::pow(sc, cfg_.m + 1);
    return chi * scale_pow * table_->eval(sc * a_of(x), sc * b_of(x, u));
}

double DyadicKernel::eval_quad(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    double chi = cfg_.chi_x(x) * cfg_.chi_u(u);
    if (chi == 0.0) return 0.0;
    double a = a_of(x), b = b_of(x, u);
    double sc = band_scale();
    double hi = 2.0 * sc;  // window support radius in absolute frequency
    // W(a,b) = 4 int_0^hi int_0^hi window(sigma,tau) cos(sigma a) cos(tau b)
    int lsig = 0;  // sigma-window sharpness: features live at scale 2^-lsig
    if (band_.kind == BandIndex::Kind::band) lsig = band_.l;
    if (band_.kind == BandIndex::Kind::residual) lsig = sigma_band_count(band_.k);
    int panels_s = 3 + static_cast<int>(hi * std::abs(a) / 5.0) + (2 << lsig);
    int panels_t = 3 + static_cast<int>(hi * std::abs(b) / 5.0);
    double acc = 0.0;
    double hs = hi / panels_s, ht = hi / panels_t;
    const QuadRule& gl = gauss_legendre(14);
    for (int ps = 0; ps < panels_s; ++ps) {
        for (int is = 0; is < 14; ++is) {
            double sig = (ps + 0.5 * (1.0 + gl.nodes[is])) * hs;
            double ws = 0.5 * hs * gl.weights[is];
            double inner = 0.0;
            for (int pt = 0; pt < panels_t; ++pt)
                for (int it = 0; it < 14; ++it) {
                    double ta = (pt + 0.5 * (1.0 + gl.nodes[it])) * ht;
                    double wt = 0.5 * ht * gl.weights[it];
                    inner += wt * window_abs(sig, ta) * std::cos(ta * b);
                }
            acc += ws * inner * std::cos(sig * a);
        }
    }
    return chi * 4.0 * acc;
}

double DyadicKernel::scale_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    double cx = cfg_.chi_x(x), cu = cfg_.chi_u(u);
    double sc = band_scale();
    double scale_pow = std::pow(sc, cfg_.m + 1);
    double a = a_of(x), b = b_of(x, u);
    double F, Fp, Fq;
    table_->eval_grad(sc * a, sc * b, &F, &Fp, &Fq);
    F *= scale_pow;
    double Fa = Fp * scale_pow * sc;
    double Fb = Fq * scale_pow * sc;

    int Q = cfg_.d + 2 * cfg_.m;
    Eigen::VectorXd xp = x.head(cfg_.d - 1);
    double phase_a = -x[cfg_.d - 1] + xp.dot(cfg_.surface.grad_gamma(xp));
    double phase_b = (cfg_.Lambda * x)(0) - 2.0 * u[0];

    double val = -Q * cx * cu * F;
    val += -(cfg_.x_dot_grad_chi_x(x)) * cu * F - 2.0 * cfg_.u_dot_grad_chi_u(u) * cx * F;
    val += cx * cu * (Fa * phase_a + Fb * phase_b);
    return val;
}

double DyadicKernel::eval_dilated(double t, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u) const {
    int Q = cfg_.d + 2 * cfg_.m;
    return std::pow(t, -Q) * eval(x / t, u / (t * t));
}

double DyadicKernel::scale_deriv_fd(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double h,
                                    bool use_quad) const {
    int Q = cfg_.d + 2 * cfg_.m;
    auto f = [&](double s) {
        Eigen::VectorXd xs = x / s;
        Eigen::VectorXd us = u / (s * s);
        double val = use_quad ? eval_quad(xs, us) : eval(xs, us);
        return std::pow(s, -Q) * val;
    };
    return (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
}

namespace {

// chi_u transform: 2 int_0^ru zeta0(w/ru) cos(tau w) dw
double chi_u_hat(double ru, double tau) {
    int panels = 1 + static_cast<int>(std::abs(tau) * ru / 5.0);
    auto f = [&](double w) { return zeta0(w / ru) * std::cos(tau * w); };
    return 2.0 * integrate_panels(f, 0.0, ru, 12, panels);
}

}  // namespace

double DyadicKernel::integral(int order) const {
    if (cfg_.d != 2) throw std::invalid_argument("integral: implemented for d = 2");
    double sc = band_scale();
    double hi = 2.0 * sc;
    double mu = order / 32.0;
    double rx = cfg_.rx, ru = cfg_.ru;
    double gmax = std::abs(cfg_.surface.gamma1(rx)) + std::abs(cfg_.surface.gamma1(-rx));
    double amax = rx + gmax;
    bool lambda_zero = cfg_.Lambda.isZero(0.0);

    // x-side transform at one frequency pair:
    // G(sigma, tau) = int chi_x(x) e^{i sigma (x_d - Gamma(x')) - i tau Lambda x} dx
    auto Gfun = [&](double sigma, double tau) -> cd {
        int panels_d = 1 + static_cast<int>(mu * (2.0 + std::abs(sigma) * rx / 5.0));
        double lam_rate = lambda_zero ? 0.0 : std::abs(tau) * cfg_.Lambda.cwiseAbs().maxCoeff();
        int panels_p = 1 + static_cast<int>(mu * (1.0 + (std::abs(sigma) * gmax + lam_rate * rx) / 5.0));
        cd acc = 0.0;
        const QuadRule& gl = gauss_legendre(12);
        double hp = 2.0 * rx / panels_p, hd = 2.0 * rx / panels_d;
        for (int pp = 0; pp < panels_p; ++pp)
            for (int ip = 0; ip < 12; ++ip) {
                double xp = -rx + (pp + 0.5 * (1.0 + gl.nodes[ip])) * hp;
                double wp = 0.5 * hp * gl.weights[ip];
                double gam = cfg_.surface.gamma1(xp);
                for (int pd = 0; pd < panels_d; ++pd)
                    for (int id = 0; id < 12; ++id) {
                        double xd = -rx + (pd + 0.5 * (1.0 + gl.nodes[id])) * hd;
                        double wd = 0.5 * hd * gl.weights[id];
                        Eigen::VectorXd x(2);
                        x << xp, xd;
                        double c = cfg_.chi_x(x);
                        if (c == 0.0) continue;
                        double phase = sigma * (xd - gam);
                        if (!lambda_zero) phase -= tau * (cfg_.Lambda * x)(0);
                        acc += wp * wd * c * std::polar(1.0, phase);
                    }
            }
        return acc;
    };

    int panels_sig = std::max(3, static_cast<int>(mu * (4.0 + hi * amax / 5.0)));
    int panels_tau = std::max(3, static_cast<int>(mu * (2.0 + hi * ru / 5.0)));
    const QuadRule& gl = gauss_legendre(12);
    double hsig = hi / panels_sig;

    if (lambda_zero) {
        // integral = 4 Re sum_{sigma>0, tau>0} window * chi_u_hat(tau) * G(sigma)
        std::vector<double> signodes(static_cast<std::size_t>(panels_sig) * 12);
        std::vector<double> sigweights(signodes.size());
        for (int p = 0; p < panels_sig; ++p)
            for (int i = 0; i < 12; ++i) {
                signodes[static_cast<std::size_t>(p) * 12 + i] =
                    (p + 0.5 * (1.0 + gl.nodes[i])) * hsig;
                sigweights[static_cast<std::size_t>(p) * 12 + i] = 0.5 * hsig * gl.weights[i];
            }
        std::vector<cd> Gv(signodes.size());
        parallel_for(signodes.size(), [&](std::size_t lo, std::size_t hicap) {
            for (std::size_t i = lo; i < hicap; ++i) Gv[i] = Gfun(signodes[i], 0.0);
        });
        double htau = hi / panels_tau;
        double total = 0.0;
        for (int pt = 0; pt < panels_tau; ++pt)
            for (int it = 0; it < 12; ++it) {
                double tau = (pt + 0.5 * (1.0 + gl.nodes[it])) * htau;
                double wt = 0.5 * htau * gl.weights[it];
                double cu = chi_u_hat(ru, tau);
                if (cu == 0.0) continue;
                for (std::size_t i = 0; i < signodes.size(); ++i) {
                    double w = window_abs(signodes[i], tau);
                    if (w == 0.0) continue;
                    total += wt * sigweights[i] * w * cu * Gv[i].real();
                }
            }
        return 4.0 * total;
    }

    // general Lambda: 2 Re over sigma > 0, tau in R
    double htau = 2.0 * hi / (2 * panels_tau);
    std::vector<std::array<double, 3>> nodes;  // sigma, tau, weight
    for (int ps = 0; ps < panels_sig; ++ps)
        for (int is = 0; is < 12; ++is) {
            double sig = (ps + 0.5 * (1.0 + gl.nodes[is])) * hsig;
            double wsig = 0.5 * hsig * gl.weights[is];
            for (int pt = 0; pt < 2 * panels_tau; ++pt)
                for (int it = 0; it < 12; ++it) {
                    double tau = -hi + (pt + 0.5 * (1.0 + gl.nodes[it])) * htau;
                    double w = window_abs(sig, tau);
                    if (w == 0.0) continue;
                    nodes.push_back({sig, tau, wsig * 0.5 * htau * gl.weights[it] * w});
                }
        }
    std::vector<double> parts(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hicap) {
        for (std::size_t i = lo; i < hicap; ++i) {
            auto [sig, tau, w] = nodes[i];
            parts[i] = w * chi_u_hat(ru, tau) * Gfun(sig, tau).real();
        }
    });
    double total = 0.0;
    for (double p : parts) total += p;
    return 2.0 * total;
}

double DyadicKernel::bump(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return zeta0(x.norm() / (2.0 * cfg_.rx)) * zeta0(u.norm() / (2.0 * cfg_.ru));
}

double DyadicKernel::bump_integral() const {
    if (cfg_.d != 2 || cfg_.m != 1)
        throw std::invalid_argument("bump_integral: implemented for d = 2, m = 1");
    // radial profiles: 2 pi (2rx)^2 int_0^1 zeta0(r) r dr  x  2 (2ru) int_0^1 zeta0(r) dr
    double I1 = integrate_gl([](double r) { return zeta0(r) * r; }, 0.0, 1.0, 64);
    double I0 = integrate_gl([](double r) { return zeta0(r); }, 0.0, 1.0, 64);
    double Rx = 2.0 * cfg_.rx, Ru = 2.0 * cfg_.ru;
    return (2.0 * pi * Rx * Rx * I1) * (2.0 * Ru * I0);
}

double DyadicKernel::gamma_coefficient(int order) const { return integral(order) / bump_integral(); }

double DyadicKernel::corrected(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               double gamma) const {
    return eval(x, u) - gamma * bump(x, u);
}

KernelSizeReport kernel_size_report(const DyadicKernel& K, int oversample) {
    const KernelConfig& cfg = K.config();
    if (cfg.d != 2 || cfg.m != 1)
        throw std::invalid_argument("kernel_size_report: implemented for d = 2, m = 1");
    double sc = K.band_scale();
    int kl = 0;
    if (K.band().kind == BandIndex::Kind::band) kl = K.band().l;
    if (K.band().kind == BandIndex::Kind::residual) kl = sigma_band_count(K.band().k);
    double h = std::min(0.5 / sc, cfg.rx / 12.0) / oversample;
    int nx = static_cast<int>(std::ceil(2.0 * cfg.rx / h));
    int nu = static_cast<int>(std::ceil(2.0 * cfg.ru / h));
    double hx = 2.0 * cfg.rx / nx, hu = 2.0 * cfg.ru / nu;
    double cell = hx * hx * hu;

    KernelSizeReport rep;
    rep.cells = static_cast<std::size_t>(nx) * nx * nu;
    std::vector<double> l1(nx, 0.0), dl1(nx, 0.0), c2(nx, 0.0), mx(nx, 0.0);
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t lo, std::size_t hicap) {
        Eigen::VectorXd x(2), u(1);
        for (std::size_t i = lo; i < hicap; ++i) {
            double xp = -cfg.rx + (i + 0.5) * hx;
            for (int j = 0; j < nx; ++j) {
                double xd = -cfg.rx + (j + 0.5) * hx;
                x << xp, xd;
                double gam = cfg.surface.gamma1(xp);
                for (int t = 0; t < nu; ++t) {
                    u[0] = -cfg.ru + (t + 0.5) * hu;
                    double val = K.eval(x, u);
                    double dval = K.scale_deriv(x, u);
                    double av = std::abs(val);
                    l1[i] += av;
                    dl1[i] += std::abs(dval);
                    mx[i] = std::max(mx[i], av);
                    double aa = sc / std::ldexp(1.0, kl) * std::abs(xd - gam);
                    double bb = sc * std::abs(u[0] - (cfg.Lambda * x)(0));
                    double env = (sc / std::ldexp(1.0, kl)) * sc /
                                 ((1.0 + aa) * (1.0 + aa) * (1.0 + bb) * (1.0 + bb));
                    if (env > 0) c2[i] = std::max(c2[i], av / env);
                }
            }
        }
    });
    for (int i = 0; i < nx; ++i) {
        rep.l1 += l1[i] * cell;
        rep.scale_deriv_l1 += dl1[i] * cell;
        rep.pointwise_c2 = std::max(rep.pointwise_c2, c2[i]);
        rep.max_abs = std::max(rep.max_abs, mx[i]);
    }
    return rep;
}

SliceTables build_slice_tables(const DyadicKernel& K, double tau, double a_max,
                               bool with_derivs) {
    const KernelConfig& cfg = K.config();
    double sc = K.band_scale();
    double scale_pow = std::pow(sc, cfg.m + 1);
    const FtTable2& T = K.shape_table();

    SliceTables S;
    S.tau = tau;
    S.with_derivs = with_derivs;
    double da = 0.1 / sc;
    int na = static_cast<int>(a_max / da) + 8;

    int panels = 2 + static_cast<int>((2.0 * sc + std::abs(tau)) * cfg.ru / 5.0);
    const QuadRule& gl = gauss_legendre(12);
    double hw = cfg.ru / panels;

    S.V.n = na; S.V.dx = da; S.V.v.assign(na, 0.0);
    if (with_derivs) {
        S.Va.n = na; S.Va.dx = da; S.Va.odd = true; S.Va.v.assign(na, 0.0);
        S.Vtau.n = na; S.Vtau.dx = da; S.Vtau.v.assign(na, 0.0);
    }
    parallel_for(static_cast<std::size_t>(na), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double a = i * da;
            double v = 0, va = 0, vt = 0;
            for (int p = 0; p < panels; ++p)
                for (int q = 0; q < 12; ++q) {
                    double w = (p + 0.5 * (1.0 + gl.nodes[q])) * hw;
                    double wgt = 0.5 * hw * gl.weights[q] * zeta0(w / cfg.ru);
                    if (wgt == 0.0) continue;
                    double c = std::cos(tau * w), s = std::sin(tau * w);
                    if (!with_derivs) {
                        v += wgt * T.eval(sc * a, sc * w) * c;
                    } else {
                        double F, Fp, Fq;
                        T.eval_grad(sc * a, sc * w, &F, &Fp, &Fq);
                        v += wgt * F * c;
                        va += wgt * Fp * sc * c;
                        vt -= wgt * w * F * s;
                    }
                }
            // V(a,tau) = 2 int_0^ru chi_u(w) W(sc a, sc w) cos(tau w) dw
            S.V.v[i] = 2.0 * scale_pow * v;
            if (with_derivs) {
                S.Va.v[i] = 2.0 * scale_pow * va;
                S.Vtau.v[i] = 2.0 * scale_pow * vt;
            }
        }
    });
    return S;
}

}  // namespace nilsphere
