#include "nilsphere/sharpness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "nilsphere/bump.hpp"
#include "nilsphere/common.hpp"
#include "nilsphere/quadrature.hpp"

namespace nilsphere {

namespace {

double sphere_area(int d) {
    // surface measure of the unit sphere in R^d
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Golden-section search for the maximum of a unimodal bracket.
template <typename F>
double golden_max(const F& f, double a, double b, int iters) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

// Average of f(y1, y2, v) over the circle of radius t centred at the probe
// (x1, 0) with central coordinate u, twisted by the step-two product:
//   y(th) = (x1 - t cos th, -t sin th),  v(th) = u - t x1 sin th.
// The distance |y(th)| increases monotonically in |th|, so an inner cutoff
// at radius `inner` removes exactly the angles |th| < th_start; quadrature
// panels grow geometrically away from th_start where the integrand peaks.
template <typename F>
double circle_average(const F& f, double x1, double u, double t, double inner) {
    const double rmin = std::abs(x1 - t), rmax = x1 + t;
    if (inner >= rmax) return 0.0;
    double th_start = 0.0;
    if (inner > rmin) {
        double s2 = (inner * inner - rmin * rmin) / (4.0 * x1 * t);
        th_start = 2.0 * std::asin(std::min(1.0, std::sqrt(s2)));
    }
    if (th_start >= pi) return 0.0;

    const QuadRule& gl = gauss_legendre(12);
    const double step0 = 1e-6;
    double total = 0.0;
    double lo = th_start, width = step0;
    while (lo < pi) {
        double hi = std::min(pi, lo + width);
        double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            for (int side = 0; side < 2; ++side) {
                double th = c + hw * gl.nodes[q];
                if (side) th = -th;
                double y1 = x1 - t * std::cos(th);
                double y2 = -t * std::sin(th);
                double v = u - t * x1 * std::sin(th);
                total += hw * gl.weights[q] * f(y1, y2, v);
            }
        }
        lo = hi;
        width *= 2.0;
    }
    return total / (2.0 * pi);
}

}  // namespace

double SteinFunction::radial(double r) const {
    if (r < inner_cutoff || r <= 0.0) return 0.0;
    double taper = zeta0(r / outer_radius);
    if (taper == 0.0) return 0.0;
    // outer_radius < 1 keeps log(1/r) bounded away from zero on the support
    return std::pow(r, 1.0 - d) / (-std::log(r)) * taper;
}

double SteinFunction::value(const Eigen::VectorXd& y, double v) const {
    return radial(y.norm()) * zeta0(std::abs(v) / v_radius);
}

bool BallSpec::contains(const Eigen::VectorXd& x, double u) const {
    return x.norm() <= delta && std::abs(u) <= delta * delta;
}

ShellTable stein_lp_profile(int d, double p, int j_lo, int j_hi) {
    ShellTable out;
    out.d = d;
    out.p = p;
    j_lo = std::max(j_lo, 3);  // keep every shell inside the taper plateau
    SteinFunction f;
    f.d = d;
    const double surf = sphere_area(d);

    double running = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        double a = std::pow(2.0, -j - 1), b = std::pow(2.0, -j);
        auto integrand = [&](double r) {
            return std::pow(f.radial(r), p) * std::pow(r, d - 1);
        };
        ShellRow row;
        row.j = j;
        row.integral = surf * integrate_panels(integrand, a, b, 24, 4);
        row.closed_form = (d == 2 && std::abs(p - 2.0) < 1e-12)
                              ? 2.0 * pi / (std::log(2.0) * j * (j + 1))
                              : std::numeric_limits<double>::quiet_NaN();
        running += row.integral;
        row.partial_sum = running;
        out.rows.push_back(row);
    }

    // fit shell_j ~ 2^{-a j} j^{-b}
    std::vector<double> vj, vlog, vz;
    for (const auto& row : out.rows) {
        vj.push_back(static_cast<double>(row.j));
        vlog.push_back(std::log2(static_cast<double>(row.j)));
        vz.push_back(log2_safe(row.integral));
    }
    PlaneFit fit = fit_plane(vj, vlog, vz);
    out.pow2_exponent = -fit.a;
    out.log_exponent = -fit.b;

    // ratio test over the tail, refined by Raabe when the ratio tends to 1
    std::size_t nr = out.rows.size();
    std::vector<double> ratios, raabe;
    for (std::size_t i = nr / 2; i + 1 < nr; ++i) {
        double rho = out.rows[i + 1].integral / out.rows[i].integral;
        ratios.push_back(rho);
        raabe.push_back(out.rows[i].j * (1.0 - rho));
    }
    out.raabe_limit = median_of(raabe);
    double rho_max = *std::max_element(ratios.begin(), ratios.end());
    double rho_min = *std::min_element(ratios.begin(), ratios.end());
    if (rho_max < 0.95) {
        out.convergent = true;
    } else if (rho_min > 1.02) {
        out.convergent = false;
    } else {
        out.convergent = out.raabe_limit > 1.0;
    }
    return out;
}

BlowupTable blowup_experiment(int level_lo, int level_hi) {
    BlowupTable out;
    const double outer = 0.25, vrad = 0.5;
    const double ln2 = std::log(2.0);

    // fixed pieces of the truncated L^2 norms: the taper tail and the
    // central-variable factor (both independent of the truncation level)
    double taper_tail = 2.0 * pi *
                        integrate_panels(
                            [&](double r) {
                                double z = zeta0(r / outer);
                                double L = -std::log(r);
                                return z * z / (r * L * L);
                            },
                            0.5 * outer, outer, 24, 4);
    double v_factor = 2.0 * integrate_panels(
                                [&](double v) {
                                    double z = zeta0(v / vrad);
                                    return z * z;
                                },
                                0.0, vrad, 24, 4);

    // Reference bump wide enough that every scanned circle stays in its
    // plateau: its maximal average is exactly 1 at every level, so any
    // growth in mf comes from the integrable singularity, not from the
    // averaging machinery.
    auto smooth = [&](double y1, double y2, double v) {
        return zeta0(std::hypot(y1, y2) / 2.4) * zeta0(std::abs(v) / 0.8);
    };

    for (int j = level_lo; j <= level_hi; ++j) {
        BlowupRow row;
        row.level = j;
        const double R = std::pow(2.0, 3 - j);
        const double eps = std::pow(2.0, -j);
        row.probe_radius = R;

        SteinFunction f;
        f.inner_cutoff = eps;
        f.outer_radius = outer;
        f.v_radius = vrad;
        auto feval = [&](double y1, double y2, double v) {
            return f.radial(std::hypot(y1, y2)) * zeta0(std::abs(v) / vrad);
        };

        auto scan_max = [&](auto&& g, double hole) {
            const int nt = 45;
            const double t_lo = 0.75 * R, t_hi = 1.30 * R;
            double best = -1.0;
            int best_i = 0;
            std::vector<double> vals(nt);
            for (int i = 0; i < nt; ++i) {
                double t = t_lo + (t_hi - t_lo) * i / (nt - 1);
                vals[i] = circle_average(g, R, 0.0, t, hole);
                if (vals[i] > best) {
                    best = vals[i];
                    best_i = i;
                }
            }
            double dt = (t_hi - t_lo) / (nt - 1);
            double bl = t_lo + dt * std::max(0, best_i - 1);
            double bh = t_lo + dt * std::min(nt - 1, best_i + 1);
            auto eval_t = [&](double t) { return circle_average(g, R, 0.0, t, hole); };
            return std::max(best, golden_max(eval_t, bl, bh, 30));
        };

        row.mf = scan_max(feval, eps);
        row.mf_smooth = scan_max(smooth, 0.0);
        // exact antiderivative on the plateau, quadrature on the taper tail
        double plateau = 2.0 * pi * (1.0 / (3.0 * ln2) - 1.0 / (j * ln2));
        row.lp_partial = std::sqrt(v_factor * (plateau + taper_tail));
        out.rows.push_back(row);
    }

    out.monotone = true;
    std::vector<double> lv, lmf, lms;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        if (i > 0 && out.rows[i].mf <= out.rows[i - 1].mf) out.monotone = false;
        lv.push_back(static_cast<double>(out.rows[i].level));
        lmf.push_back(log2_safe(out.rows[i].mf));
        lms.push_back(log2_safe(out.rows[i].mf_smooth));
        out.lp_bound = std::max(out.lp_bound, out.rows[i].lp_partial);
    }
    out.growth = fit_line(lv, lmf).slope;
    out.smooth_growth = fit_line(lv, lms).slope;
    return out;
}

EndpointTable endpoint_divergence(int q_lo, int q_hi) {
    EndpointTable out;
    const double R = 0.125;  // probe distance; the circle of radius R through
                             // the probe passes through the singular point
    for (int q = q_lo; q <= q_hi; ++q) {
        SteinFunction f;
        f.inner_cutoff = std::pow(2.0, -q);
        auto feval = [&](double y1, double y2, double v) {
            return f.radial(std::hypot(y1, y2)) * zeta0(std::abs(v) / f.v_radius);
        };
        EndpointRow row;
        row.q = q;
        row.eps = f.inner_cutoff;
        row.average = circle_average(feval, R, 0.0, R, f.inner_cutoff);
        out.rows.push_back(row);
    }

    out.monotone = true;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        if (i > 0 && out.rows[i].average <= out.rows[i - 1].average) out.monotone = false;
        lx.push_back(std::log(static_cast<double>(out.rows[i].q)));
        ly.push_back(out.rows[i].average);
    }
    LinearFit fit = fit_line(lx, ly);
    out.log_slope = fit.slope;
    double mean = 0.0;
    for (double y : ly) mean += y;
    mean /= ly.size();
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < ly.size(); ++i) {
        double pred = fit.slope * lx[i] + fit.intercept;
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - mean) * (ly[i] - mean);
    }
    out.correlation = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 0.0;
    return out;
}

namespace {

struct ShiftSample {
    double y1, y2, v;
};

// One translation-difference integral: 3-d midpoint quadrature of
// sup_s |K_s(h^{-1} g) - K_s(g)| over the reach of both supports minus
// B_{excl}, maximized over the shift samples on the boundary of B_r.
HormanderRow hormander_row(const KernelConfig& cfg, int k, int l, double r, double excl,
                           int threads) {
    HormanderRow row;
    row.k = k;
    row.l = l;
    row.r = r;

    DyadicKernel K(cfg, BandIndex::band(k, l));
    const std::array<double, 4> ss = {1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0};
    std::array<double, 4> s_inv{}, s_inv2{}, s_pow{};
    const int Q = cfg.d + 2 * cfg.m;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        s_inv[i] = 1.0 / ss[i];
        s_inv2[i] = s_inv[i] * s_inv[i];
        s_pow[i] = std::pow(ss[i], -Q);
    }

    const double rt = 1.0 / std::sqrt(2.0);
    const std::array<ShiftSample, 6> shifts = {{{r, 0.0, 0.0},
                                                {0.0, r, 0.0},
                                                {r * rt, r * rt, 0.0},
                                                {0.0, 0.0, r * r},
                                                {r * rt, 0.0, 0.5 * r * r},
                                                {0.0, r * rt, -0.5 * r * r}}};

    const double h = std::pow(2.0, -k - 2);
    const double reach_x = 2.0 * cfg.rx + r + 2.0 * h;
    const double reach_u0 = 4.0 * cfg.ru + r * r + 2.0 * h;
    const int n1 = static_cast<int>(std::ceil(2.0 * reach_x / h));
    const double x_lo = -0.5 * n1 * h;
    const double excl2 = excl * excl;

    std::array<double, 6> sums{};
    std::mutex merge;
    parallel_for(
        static_cast<std::size_t>(n1),
        [&](std::size_t lo, std::size_t hi) {
            Eigen::VectorXd xb(2), ub(1);
            std::array<double, 6> local{};
            std::array<double, 4> base{};
            for (std::size_t i1 = lo; i1 < hi; ++i1) {
                double x1 = x_lo + (i1 + 0.5) * h;
                for (int i2 = 0; i2 < n1; ++i2) {
                    double x2 = x_lo + (i2 + 0.5) * h;
                    double rho = std::hypot(x1, x2);
                    if (rho > reach_x) continue;
                    double u_reach = reach_u0 + r * rho;
                    int nu = static_cast<int>(std::ceil(u_reach / h));
                    for (int iu = -nu; iu < nu; ++iu) {
                        double u = (iu + 0.5) * h;
                        if (rho <= excl && std::abs(u) <= excl2) continue;
                        for (std::size_t si = 0; si < ss.size(); ++si) {
                            xb[0] = x1 * s_inv[si];
                            xb[1] = x2 * s_inv[si];
                            ub[0] = u * s_inv2[si];
                            base[si] = s_pow[si] * K.eval(xb, ub);
                        }
                        for (std::size_t sh = 0; sh < shifts.size(); ++sh) {
                            double a1 = x1 - shifts[sh].y1;
                            double a2 = x2 - shifts[sh].y2;
                            double au = u - shifts[sh].v -
                                        (shifts[sh].y1 * x2 - shifts[sh].y2 * x1);
                            double worst = 0.0;
                            for (std::size_t si = 0; si < ss.size(); ++si) {
                                xb[0] = a1 * s_inv[si];
                                xb[1] = a2 * s_inv[si];
                                ub[0] = au * s_inv2[si];
                                double val = s_pow[si] * K.eval(xb, ub);
                                worst = std::max(worst, std::abs(val - base[si]));
                            }
                            local[sh] += worst;
                        }
                    }
                }
            }
            std::lock_guard<std::mutex> g(merge);
            for (std::size_t sh = 0; sh < shifts.size(); ++sh) sums[sh] += local[sh];
        },
        threads);

    double cell = h * h * h;
    for (double s : sums) row.integral = std::max(row.integral, s * cell);

    const double lambda_norm = 1.0;  // operator norm of the skew form
    row.bound_band = std::pow(2.0, k - l) * (1.0 + lambda_norm * std::pow(2.0, l));
    row.bound_grad = std::pow(2.0, k * (cfg.m + 2)) * std::min(1.0 / r, r);
    row.ratio = row.integral / std::min(row.bound_band, row.bound_grad);
    return row;
}

}  // namespace

HormanderTable hormander_condition_check(const KernelConfig& cfg, const std::vector<int>& k_list,
                                         const std::vector<int>& l_list,
                                         const std::vector<double>& r_list, int threads) {
    HormanderTable out;
    for (int k : k_list) {
        for (int l : l_list) {
            if (!BandIndex::band(k, l).valid()) continue;
            for (double r : r_list) {
                HormanderRow row = hormander_row(cfg, k, l, r, 10.0 * r, threads);
                out.fitted_constant = std::max(out.fitted_constant, row.ratio);
                out.rows.push_back(row);
            }
        }
    }
    int k0 = k_list.empty() ? 4 : k_list.front();
    int l0 = l_list.empty() ? 0 : l_list.front();
    // with 10r beyond the reach of both supports the whole domain is excluded
    out.disjoint_support_integral = hormander_row(cfg, k0, l0, 0.2, 2.0, threads).integral;
    out.continuity_value = hormander_row(cfg, k0, l0, std::pow(2.0, -10), 0.0, threads).integral;
    return out;
}

}  // namespace nilsphere
