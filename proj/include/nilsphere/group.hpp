#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nilsphere/common.hpp"

namespace nilsphere {

// Point (x, u) in R^d x R^m with the step-two product
//   (x, u) . (y, v) = (x + y, u + v + [x, y]),  [x, y]_i = x^T J_i y.
struct GroupElement {
    Eigen::VectorXd x;
    Eigen::VectorXd u;
};

class StepTwoGroup {
public:
    StepTwoGroup(int d, int m, std::vector<Eigen::MatrixXd> J, std::string label);

    int d() const { return d_; }
    int m() const { return m_; }
    const std::string& label() const { return label_; }
    const Eigen::MatrixXd& J(int i) const { return J_[i]; }

    Eigen::VectorXd commutator(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd J_of(const Eigen::VectorXd& u) const;  // sum_i u_i J_i

    GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& a) const;
    GroupElement identity() const;
    GroupElement dilate(double t, const GroupElement& a) const;  // (t x, t^2 u)

    // rotation conjugation J_i -> Q^T J_i Q (Q orthogonal d x d)
    StepTwoGroup conjugate_by_rotation(const Eigen::MatrixXd& Q) const;

    // nondegeneracy constants over the unit sphere in the central variable:
    //   c0 = min_{|u|=1} smallest singular value of J_u
    //   C0 = max_{|u|=1} largest singular value of J_u
    struct Constants {
        double c0;
        double C0;
    };
    Constants nondegeneracy_constants() const;
    bool is_metivier(double tol = 1e-10) const;

    // kappa with J_i J_j + J_j J_i = -2 kappa delta_ij I, if the relations hold
    std::optional<double> h_type_kappa(double tol = 1e-10) const;

    std::string to_json() const;
    static StepTwoGroup from_json(const std::string& text);

private:
    int d_, m_;
    std::vector<Eigen::MatrixXd> J_;
    std::string label_;
};

// Builders.
StepTwoGroup heisenberg_group(int n, bool doubled = false);  // d = 2n, m = 1
StepTwoGroup appendix_group();        // d = 8, m = 2, J_mu pencil with det (mu1^4 + mu2^4)^2
StepTwoGroup htype_companion_group(); // d = 8, m = 2, H-type with the same dimensions
StepTwoGroup quaternionic_group();    // d = 4, m = 3, left multiplication by i, j, k
StepTwoGroup abelian_group(int d, int m);  // J = 0 (degenerate control)

}  // namespace nilsphere
