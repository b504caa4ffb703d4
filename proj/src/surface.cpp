#include "nilsphere/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace nilsphere {

double Surface::gamma(const Eigen::VectorXd& xp) const {
    double r2 = xp.squaredNorm();
    if (kind == Kind::paraboloid) return 0.5 * curvature * r2;
    double s = curvature * curvature * r2;
    if (s >= 1.0) throw std::domain_error("sphere_cap: point outside the chart");
    // cap of the radius-1/curvature sphere, osculating the paraboloid at 0
    return (1.0 - std::sqrt(1.0 - s)) / curvature;
}

Eigen::VectorXd Surface::grad_gamma(const Eigen::VectorXd& xp) const {
    if (kind == Kind::paraboloid) return curvature * xp;
    double s = curvature * curvature * xp.squaredNorm();
    return curvature / std::sqrt(1.0 - s) * xp;
}

Eigen::MatrixXd Surface::hess_gamma(const Eigen::VectorXd& xp) const {
    int n = static_cast<int>(xp.size());
    if (kind == Kind::paraboloid) return curvature * Eigen::MatrixXd::Identity(n, n);
    double s = curvature * curvature * xp.squaredNorm();
    double w = std::sqrt(1.0 - s);
    Eigen::MatrixXd H = curvature / w * Eigen::MatrixXd::Identity(n, n);
    H += std::pow(curvature, 3) / (w * w * w) * xp * xp.transpose();
    return H;
}

double Surface::gamma1(double xp) const {
    Eigen::VectorXd v(1);
    v[0] = xp;
    return gamma(v);
}

double Surface::dgamma1(double xp) const {
    Eigen::VectorXd v(1);
    v[0] = xp;
    return grad_gamma(v)[0];
}

double Surface::d2gamma1(double xp) const {
    Eigen::VectorXd v(1);
    v[0] = xp;
    return hess_gamma(v)(0, 0);
}

double Surface::d3gamma1(double xp) const {
    if (kind == Kind::paraboloid) return 0.0;
    double c = curvature;
    double s = c * c * xp * xp;
    double w = std::sqrt(1.0 - s);
    // d/dx [c/w + c^3 x^2 / w^3]
    return 3.0 * std::pow(c, 3) * xp / std::pow(w, 3) +
           3.0 * std::pow(c, 5) * xp * xp * xp / std::pow(w, 5);
}

}  // namespace nilsphere
