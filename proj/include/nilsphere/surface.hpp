#pragma once

#include <Eigen/Dense>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Hypersurface x_d = Gamma(x') through the origin with Gamma(0) = 0 and
// grad Gamma(0) = 0; curvature scales the model shape.
struct Surface {
    enum class Kind { paraboloid, sphere_cap };
    Kind kind = Kind::paraboloid;
    double curvature = 1.0;

    double gamma(const Eigen::VectorXd& xp) const;
    Eigen::VectorXd grad_gamma(const Eigen::VectorXd& xp) const;
    Eigen::MatrixXd hess_gamma(const Eigen::VectorXd& xp) const;

    // scalar convenience for d = 2 (one tangential coordinate)
    double gamma1(double xp) const;
    double dgamma1(double xp) const;
    double d2gamma1(double xp) const;
    double d3gamma1(double xp) const;
};

}  // namespace nilsphere
