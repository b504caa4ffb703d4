#include "nilsphere/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nilsphere {

namespace {

QuadRule compute_gl(int n) {
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

std::map<int, QuadRule> g_cache;
std::mutex g_cache_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(n);
    if (it == g_cache.end()) it = g_cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * base.nodes[i];
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    QuadRule r = gauss_legendre_on(n, a, b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}

cd integrate_gl_c(const std::function<cd(double)>& f, double a, double b, int n) {
    QuadRule r = gauss_legendre_on(n, a, b);
    cd s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}

cd integrate_panels_c(const std::function<cd(double)>& f, double a, double b, int n, int panels) {
    cd s = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += integrate_gl_c(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int n,
                        int panels) {
    double s = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += integrate_gl(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

}  // namespace nilsphere
