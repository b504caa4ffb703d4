#include "nilsphere/discrete_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "nilsphere/fft_utils.hpp"

namespace nilsphere {

namespace {

// DFT of every central-axis line; layout [(i1*Nx+i2)*Nu + p].
std::vector<cd> central_dft(const GridFn& f, int sign) {
    const int Nu = f.g.Nu;
    Fft1d plan(Nu, sign);
    std::vector<cd> out(f.v.size());
    std::vector<cd> line(Nu);
    for (int i1 = 0; i1 < f.g.Nx; ++i1)
        for (int i2 = 0; i2 < f.g.Nx; ++i2) {
            for (int j = 0; j < Nu; ++j) line[j] = f.at(i1, i2, j);
            plan.run(line);
            for (int p = 0; p < Nu; ++p)
                out[(static_cast<std::size_t>(i1) * f.g.Nx + i2) * Nu + p] = line[p];
        }
    return out;
}

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

// Symmetric frequency representative nu in [-N/2, N/2).
inline int sym_freq(int p, int n) { return p < n / 2 ? p : p - n; }

}  // namespace

GridFn group_convolve_direct(const GridFn& f, const GridFn& g, double twist) {
    if (!(f.g == g.g)) throw std::invalid_argument("group_convolve: grid mismatch");
    const GridSpec& gr = f.g;
    const int Nx = gr.Nx, Nu = gr.Nu;
    const double hu = gr.hu();

    // Trig interpolation of g's central lines through their DFT coefficients.
    std::vector<cd> ghat = central_dft(g, -1);
    auto gline_eval = [&](int i1, int i2, double t_real) {
        const cd* c = &ghat[(static_cast<std::size_t>(i1) * Nx + i2) * Nu];
        cd s = 0.0;
        for (int p = 0; p < Nu; ++p) {
            const int nu = sym_freq(p, Nu);
            const double ph = 2.0 * pi * nu * t_real / Nu;
            s += c[p] * cd(std::cos(ph), std::sin(ph));
        }
        return s / static_cast<double>(Nu);
    };

    GridFn out(gr);
    const double vol = gr.cell_volume();
    for (int a1 = 0; a1 < Nx; ++a1)
        for (int a2 = 0; a2 < Nx; ++a2) {
            const double x1 = gr.xcoord(a1), x2 = gr.xcoord(a2);
            for (int b1 = 0; b1 < Nx; ++b1)
                for (int b2 = 0; b2 < Nx; ++b2) {
                    const double y1 = gr.xcoord(b1), y2 = gr.xcoord(b2);
                    const double c = twist * (x1 * y2 - x2 * y1);
                    const int g1 = wrap(a1 - b1 + Nx / 2, Nx);
                    const int g2 = wrap(a2 - b2 + Nx / 2, Nx);
                    for (int j = 0; j < Nu; ++j)
                        for (int vv = 0; vv < Nu; ++vv) {
                            const cd fv = f.at(b1, b2, vv);
                            if (fv == cd(0.0)) continue;
                            // central coordinate u_j - u_v + c at real line index
                            const double t_real = j - vv + Nu / 2 + c / hu;
                            out.at(a1, a2, j) += fv * gline_eval(g1, g2, t_real) * vol;
                        }
                }
        }
    return out;
}

GridFn group_convolve(const GridFn& f, const GridFn& g, double twist, int threads) {
    if (!(f.g == g.g)) throw std::invalid_argument("group_convolve: grid mismatch");
    const GridSpec& gr = f.g;
    const int Nx = gr.Nx, Nu = gr.Nu;
    const double hu = gr.hu();
    const double vol = gr.cell_volume();

    std::vector<cd> fhat = central_dft(f, -1);
    std::vector<cd> ghat = central_dft(g, -1);

    // Per central frequency: twisted planar convolution with phase
    // exp(2 pi i nu (Nu/2 + c/hu) / Nu); then invert the central DFT.
    std::vector<cd> acc(fhat.size(), cd(0.0));
    parallel_for(Nu, [&](int plo, int phi) {
        for (int p = plo; p < phi; ++p) {
            const int nu = sym_freq(p, Nu);
            const double freq_fac = 2.0 * pi * nu / Nu;
            for (int a1 = 0; a1 < Nx; ++a1)
                for (int a2 = 0; a2 < Nx; ++a2) {
                    const double x1 = gr.xcoord(a1), x2 = gr.xcoord(a2);
                    cd s = 0.0;
                    for (int b1 = 0; b1 < Nx; ++b1)
                        for (int b2 = 0; b2 < Nx; ++b2) {
                            const cd fv = fhat[(static_cast<std::size_t>(b1) * Nx + b2) * Nu + p];
                            if (fv == cd(0.0)) continue;
                            const double y1 = gr.xcoord(b1), y2 = gr.xcoord(b2);
                            const double c = twist * (x1 * y2 - x2 * y1);
                            const int g1 = wrap(a1 - b1 + Nx / 2, Nx);
                            const int g2 = wrap(a2 - b2 + Nx / 2, Nx);
                            const double ph = freq_fac * (Nu / 2 + c / hu);
                            s += fv * ghat[(static_cast<std::size_t>(g1) * Nx + g2) * Nu + p] *
                                 cd(std::cos(ph), std::sin(ph));
                        }
                    acc[(static_cast<std::size_t>(a1) * Nx + a2) * Nu + p] = s * vol;
                }
        }
    }, threads);

    // Invert central DFT line by line (unnormalized backward / Nu).
    GridFn out(gr);
    Fft1d inv(Nu, +1);
    std::vector<cd> line(Nu);
    for (int a1 = 0; a1 < Nx; ++a1)
        for (int a2 = 0; a2 < Nx; ++a2) {
            for (int p = 0; p < Nu; ++p)
                line[p] = acc[(static_cast<std::size_t>(a1) * Nx + a2) * Nu + p];
            inv.run(line);
            for (int j = 0; j < Nu; ++j)
                out.at(a1, a2, j) = line[j] / static_cast<double>(Nu);
        }
    return out;
}

GridFn adjoint_kernel(const GridFn& g) {
    const int Nx = g.g.Nx, Nu = g.g.Nu;
    GridFn out(g.g);
    for (int i1 = 0; i1 < Nx; ++i1)
        for (int i2 = 0; i2 < Nx; ++i2)
            for (int j = 0; j < Nu; ++j)
                out.at(i1, i2, j) =
                    std::conj(g.at(wrap(-i1, Nx), wrap(-i2, Nx), wrap(-j, Nu)));
    return out;
}

double convolution_operator_norm(const GridFn& g, double twist, std::uint64_t seed,
                                 double tol, int max_iter, int threads) {
    GridFn gs = adjoint_kernel(g);
    Rng rng(seed);
    GridFn f(g.g);
    for (cd& z : f.v) z = cd(rng.uniform() - 0.5, rng.uniform() - 0.5);
    double nf = grid_norm(f);
    for (cd& z : f.v) z /= nf;

    double lam = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        GridFn tf = group_convolve(f, g, twist, threads);
        GridFn ttf = group_convolve(tf, gs, twist, threads);
        const double lam_new = std::real(grid_inner(ttf, f));  // Rayleigh for T*T
        const double nn = grid_norm(ttf);
        if (nn == 0.0) return 0.0;
        for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = ttf.v[i] / nn;
        if (it > 2 && std::abs(lam_new - lam) <= tol * std::max(lam_new, 1e-300)) {
            lam = lam_new;
            break;
        }
        lam = lam_new;
    }
    return std::sqrt(std::max(lam, 0.0));
}

double convolution_operator_norm_dense(const GridFn& g, double twist, int threads) {
    const std::size_t n = g.g.total();
    if (n > 4096)
        throw std::invalid_argument("dense operator norm limited to 4096 lattice points");
    // In the orthonormal basis of normalized lattice indicators the matrix
    // entry is just (T delta_j)(x_i), so columns are convolutions of deltas.
    Eigen::MatrixXcd M(n, n);
    const int Nx = g.g.Nx, Nu = g.g.Nu;
    parallel_for(static_cast<int>(n), [&](int lo, int hi) {
        for (int col = lo; col < hi; ++col) {
            GridFn e(g.g);
            e.v[col] = 1.0;
            GridFn te = group_convolve(e, g, twist, 1);
            for (std::size_t r = 0; r < n; ++r) M(r, col) = te.v[r];
        }
    }, threads);
    (void)Nx;
    (void)Nu;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

GridFn maximal_function(const GridFn& f,
                        const std::function<cd(double, double, double, double)>& kernel_at,
                        const std::vector<double>& t_list, double twist, int threads) {
    GridFn out(f.g);
    for (double t : t_list) {
        GridFn kt = sample_grid(f.g, [&](double x1, double x2, double u) {
            return kernel_at(t, x1, x2, u);
        });
        GridFn cv = group_convolve(f, kt, twist, threads);
        for (std::size_t i = 0; i < out.v.size(); ++i)
            out.v[i] = cd(std::max(out.v[i].real(), std::abs(cv.v[i])), 0.0);
    }
    return out;
}

}  // namespace nilsphere
