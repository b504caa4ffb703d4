#include "nilsphere/bump.hpp"

#include <cmath>

namespace nilsphere {

double zeta0(double s) {
    double a = std::abs(s);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    double t = 2.0 * a - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double zeta0_prime(double s) {
    double a = std::abs(s);
    if (a <= 0.5 || a >= 1.0) return 0.0;
    double t = 2.0 * a - 1.0;
    double om = 1.0 - t * t;
    double val = std::exp(1.0 - 1.0 / om) * (-2.0 * t / (om * om)) * 2.0;
    return s < 0 ? -val : val;
}

double zeta1(double s) { return zeta0(0.5 * s) - zeta0(s); }

double zeta1_prime(double s) { return 0.5 * zeta0_prime(0.5 * s) - zeta0_prime(s); }

int sigma_band_count(int k) {
    // #{l : 1 <= l < k/3}
    int c = 0;
    for (int l = 1; 3 * l < k; ++l) ++c;
    return c;
}

namespace {
double rho_of(double sigma, const std::vector<double>& tau) {
    double s2 = sigma * sigma;
    for (double t : tau) s2 += t * t;
    return std::sqrt(s2);
}
}  // namespace

double window_low(double sigma, const std::vector<double>& tau) {
    return zeta0(rho_of(sigma, tau));
}

double window_band(int k, int l, double sigma, const std::vector<double>& tau) {
    double radial = zeta1(std::ldexp(rho_of(sigma, tau), -k));
    if (radial == 0.0) return 0.0;
    if (l == 0) return radial * (1.0 - zeta0(std::ldexp(sigma, -k)));
    return radial * zeta1(std::ldexp(sigma, l - k));
}

double window_residual(int k, double sigma, const std::vector<double>& tau) {
    double radial = zeta1(std::ldexp(rho_of(sigma, tau), -k));
    if (radial == 0.0) return 0.0;
    return radial * zeta0(std::ldexp(sigma, sigma_band_count(k) - k));
}

double window_partition_sum(int kmax, double sigma, const std::vector<double>& tau) {
    double s = window_low(sigma, tau);
    for (int k = 1; k <= kmax; ++k) {
        s += window_band(k, 0, sigma, tau);
        int L = sigma_band_count(k);
        for (int l = 1; l <= L; ++l) s += window_band(k, l, sigma, tau);
        s += window_residual(k, sigma, tau);
    }
    return s;
}

}  // namespace nilsphere
