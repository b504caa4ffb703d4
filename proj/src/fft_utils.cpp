#include "nilsphere/fft_utils.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace nilsphere {

namespace {
std::mutex g_fftw_mutex;  // plan creation/destruction is not thread-safe
}

Fft1d::Fft1d(int n, int sign) : n_(n) {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    buf_ = reinterpret_cast<cd*>(fftw_malloc(sizeof(fftw_complex) * n));
    plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                             reinterpret_cast<fftw_complex*>(buf_),
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(reinterpret_cast<fftw_plan>(plan_));
    fftw_free(buf_);
}

void Fft1d::run(std::vector<cd>& data) const {
    if (static_cast<int>(data.size()) != n_) throw std::invalid_argument("Fft1d: size mismatch");
    std::memcpy(buf_, data.data(), sizeof(cd) * n_);
    fftw_execute(reinterpret_cast<fftw_plan>(plan_));
    std::memcpy(data.data(), buf_, sizeof(cd) * n_);
}

double lag8(const double y[8], double t) {
    // barycentric form, weights for nodes 0..7: w_i = (-1)^i / (i! (7-i)!)
    static const double w[8] = {-1.0 / 5040, 1.0 / 720,  -1.0 / 240, 1.0 / 144,
                                -1.0 / 144,  1.0 / 240, -1.0 / 720, 1.0 / 5040};
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 8; ++i) {
        double d = t - i;
        if (std::abs(d) < 1e-12) return y[i];
        double c = w[i] / d;
        num += c * y[i];
        den += c;
    }
    return num / den;
}

cd lag8c(const cd y[8], double t) {
    double re[8], im[8];
    for (int i = 0; i < 8; ++i) {
        re[i] = y[i].real();
        im[i] = y[i].imag();
    }
    return {lag8(re, t), lag8(im, t)};
}

double lag8_deriv(const double y[8], double t) {
    // derivative of the interpolating polynomial via product-rule sums
    // p(t) = sum_i y_i L_i(t); L_i'(t) = L_i(t) * sum_{j != i} 1/(t - j)
    // handle near-node t by falling back to a centered finite difference of
    // the interpolant itself (smooth, spacing well inside the stencil).
    bool near_node = false;
    for (int i = 0; i < 8; ++i)
        if (std::abs(t - i) < 1e-6) near_node = true;
    if (near_node) {
        double h = 1e-4;
        return (lag8(y, t + h) - lag8(y, t - h)) / (2.0 * h);
    }
    static const double w[8] = {-1.0 / 5040, 1.0 / 720,  -1.0 / 240, 1.0 / 144,
                                -1.0 / 144,  1.0 / 240, -1.0 / 720, 1.0 / 5040};
    // p(t) = N(t)/D(t) with N = sum w_i y_i/(t-i), D = sum w_i/(t-i)
    double N = 0, D = 0, Np = 0, Dp = 0;
    for (int i = 0; i < 8; ++i) {
        double d = t - i;
        double c = w[i] / d;
        N += c * y[i];
        D += c;
        Np += -c / d * y[i];
        Dp += -c / d;
    }
    return (Np * D - N * Dp) / (D * D);
}

namespace {

// reflected/decayed gather of 8 samples starting at index i0 along one axis
inline int reflect_index(int i, int n) {
    if (i < 0) i = -i;
    return i < n ? i : -1;  // -1 marks "beyond the decay edge" -> 0
}

}  // namespace

double FtTable2::eval(double p, double q) const {
    double xp = std::abs(p) / dp, xq = std::abs(q) / dq;
    if (xp >= np - 1 || xq >= nq - 1) return 0.0;
    int ip = static_cast<int>(xp) - 3, iq = static_cast<int>(xq) - 3;
    double row[8], col[8];
    for (int a = 0; a < 8; ++a) {
        int gi = reflect_index(ip + a, np);
        if (gi < 0) {
            col[a] = 0.0;
            continue;
        }
        const double* base = v.data() + static_cast<std::size_t>(gi) * nq;
        for (int b = 0; b < 8; ++b) {
            int gj = reflect_index(iq + b, nq);
            row[b] = gj < 0 ? 0.0 : base[gj];
        }
        col[a] = lag8(row, xq - iq);
    }
    return lag8(col, xp - ip);
}

void FtTable2::eval_grad(double p, double q, double* f, double* fp, double* fq) const {
    double sp = p < 0 ? -1.0 : 1.0, sq = q < 0 ? -1.0 : 1.0;
    double xp = std::abs(p) / dp, xq = std::abs(q) / dq;
    if (xp >= np - 1 || xq >= nq - 1) {
        *f = *fp = *fq = 0.0;
        return;
    }
    int ip = static_cast<int>(xp) - 3, iq = static_cast<int>(xq) - 3;
    double col[8], colq[8], row[8];
    for (int a = 0; a < 8; ++a) {
        int gi = reflect_index(ip + a, np);
        if (gi < 0) {
            col[a] = colq[a] = 0.0;
            continue;
        }
        const double* base = v.data() + static_cast<std::size_t>(gi) * nq;
        for (int b = 0; b < 8; ++b) {
            int gj = reflect_index(iq + b, nq);
            row[b] = gj < 0 ? 0.0 : base[gj];
        }
        col[a] = lag8(row, xq - iq);
        colq[a] = lag8_deriv(row, xq - iq);
    }
    *f = lag8(col, xp - ip);
    *fp = sp * lag8_deriv(col, xp - ip) / dp;
    *fq = sq * lag8(colq, xp - ip) / dq;
}

FtTable2 build_ft_table2(const std::function<double(double, double)>& w, double s_supp,
                         double t_supp, double pmax, double qmax, double dp_target,
                         double dq_target) {
    // sample spacings: Nyquist for the largest output frequency plus an
    // aliasing guard band where the transform has already decayed
    const double guard = 60.0;
    double hs = pi / (pmax + guard);
    double ht = pi / (qmax + guard);
    if (hs > s_supp / 16) hs = s_supp / 16;
    if (ht > t_supp / 16) ht = t_supp / 16;
    auto fft_len = [](double span_needed) {
        int n = 64;
        while (n < span_needed) n *= 2;
        return n;
    };
    int Ns = fft_len(2.0 * pi / (dp_target * hs));
    int Nt = fft_len(2.0 * pi / (dq_target * ht));

    FtTable2 T;
    T.dp = 2.0 * pi / (Ns * hs);
    T.dq = 2.0 * pi / (Nt * ht);
    T.np = static_cast<int>(pmax / T.dp) + 1;
    T.nq = static_cast<int>(qmax / T.dq) + 1;
    T.v.assign(static_cast<std::size_t>(T.np) * T.nq, 0.0);

    // stage 1: per s-sample, transform in t and keep the q >= 0 columns
    // A(s, q) = integral w(s,t) e^{iqt} dt  (real by evenness in t)
    std::vector<double> A(static_cast<std::size_t>(Ns) * T.nq, 0.0);
    {
        Fft1d fft_t(Nt, +1);
        std::vector<cd> rowbuf(Nt);
        double t0 = -0.5 * Nt * ht;
        for (int i = 0; i < Ns; ++i) {
            double s = (i - Ns / 2) * hs;
            if (std::abs(s) > s_supp) continue;  // row stays zero
            bool any = false;
            for (int j = 0; j < Nt; ++j) {
                double t = t0 + j * ht;
                double val = std::abs(t) <= t_supp ? w(s, t) : 0.0;
                rowbuf[j] = val;
                if (val != 0.0) any = true;
            }
            if (!any) continue;
            fft_t.run(rowbuf);
            for (int m = 0; m < T.nq; ++m) {
                double qm = m * T.dq;
                cd phase = std::polar(ht, qm * t0);
                A[static_cast<std::size_t>(i) * T.nq + m] = (phase * rowbuf[m]).real();
            }
        }
    }

    // stage 2: per kept q-column, transform in s
    {
        Fft1d fft_s(Ns, +1);
        std::vector<cd> colbuf(Ns);
        double s0 = -0.5 * Ns * hs;
        for (int m = 0; m < T.nq; ++m) {
            for (int i = 0; i < Ns; ++i) {
                // samples were laid out at (i - Ns/2) hs; re-index from s0
                int src = i;  // same indexing: s_i = s0 + i hs with s0 = -Ns/2 hs
                colbuf[i] = A[static_cast<std::size_t>(src) * T.nq + m];
            }
            fft_s.run(colbuf);
            for (int k = 0; k < T.np; ++k) {
                double pk = k * T.dp;
                cd phase = std::polar(hs, pk * s0);
                T.v[static_cast<std::size_t>(k) * T.nq + m] = (phase * colbuf[k]).real();
            }
        }
    }

    for (int k = 0; k < T.np; ++k)
        for (int m = 0; m < T.nq; ++m) {
            double a = std::abs(T.v[static_cast<std::size_t>(k) * T.nq + m]);
            T.max_abs = std::max(T.max_abs, a);
            if (k >= T.np - 4 || m >= T.nq - 4) T.rim_abs = std::max(T.rim_abs, a);
        }
    return T;
}

double EvenTable1::eval(double x) const {
    double xi = std::abs(x) / dx;
    if (xi >= n - 1) return 0.0;
    int i0 = static_cast<int>(xi) - 3;
    double y[8];
    for (int a = 0; a < 8; ++a) {
        int i = i0 + a;
        double sgn = 1.0;
        if (i < 0) {
            i = -i;
            if (odd) sgn = -1.0;
        }
        y[a] = i < n ? sgn * v[i] : 0.0;
    }
    double val = lag8(y, xi - i0);
    return (odd && x < 0) ? -val : val;
}

}  // namespace nilsphere
