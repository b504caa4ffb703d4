#pragma once

#include <functional>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// One 1-d complex FFT size/direction, with an aligned internal buffer
// (fftw plans are cached per instance; copies in/out keep callers simple).
class Fft1d {
public:
    Fft1d(int n, int sign);  // sign: -1 forward (e^{-i}), +1 backward (e^{+i})
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;
    void run(std::vector<cd>& data) const;  // in place, unnormalized
    int size() const { return n_; }

private:
    int n_;
    void* plan_;
    cd* buf_;
};

// Degree-7 Lagrange interpolation through 8 consecutive uniform samples,
// evaluated at t in [0,7] (stencil-local coordinate).
double lag8(const double y[8], double t);
double lag8_deriv(const double y[8], double t);
cd lag8c(const cd y[8], double t);

// Fourier transform table W(p,q) = integral w(s,t) e^{i(ps+qt)} ds dt for a
// real window w, even in s and in t separately, supported in
// [-s_supp, s_supp] x [-t_supp, t_supp]. Stored on the quadrant p,q >= 0
// (W is then real and even in each variable); evaluation reflects across the
// axes and returns 0 beyond the tabulated decay range.
struct FtTable2 {
    int np = 0, nq = 0;
    double dp = 0.0, dq = 0.0;
    std::vector<double> v;  // row-major [ip * nq + iq]
    double max_abs = 0.0;   // sup |W| over the table
    double rim_abs = 0.0;   // sup |W| on the outer rim (tail-level diagnostic)

    double eval(double p, double q) const;
    // value and partial derivatives of the interpolant
    void eval_grad(double p, double q, double* f, double* fp, double* fq) const;
};

FtTable2 build_ft_table2(const std::function<double(double, double)>& w, double s_supp,
                         double t_supp, double pmax, double qmax, double dp_target,
                         double dq_target);

// 1-d uniform real table on [0, (n-1)*dx] of an even (or odd) function;
// reflection across 0 respects the stated parity, values beyond the range
// decay to 0.
struct EvenTable1 {
    int n = 0;
    double dx = 0.0;
    bool odd = false;
    std::vector<double> v;
    double eval(double x) const;
};

}  // namespace nilsphere
