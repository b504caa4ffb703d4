#pragma once

#include <functional>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule, cached per order (Newton on the Legendre recurrence).
const QuadRule& gauss_legendre(int n);

// Same rule mapped to [a, b].
QuadRule gauss_legendre_on(int n, double a, double b);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);
cd integrate_gl_c(const std::function<cd(double)>& f, double a, double b, int n);

// Composite rule: panels of order n over m equal subintervals (for integrands
// with moderate oscillation where a single panel would need huge order).
cd integrate_panels_c(const std::function<cd(double)>& f, double a, double b, int n, int panels);
double integrate_panels(const std::function<double(double)>& f, double a, double b, int n,
                        int panels);

}  // namespace nilsphere
