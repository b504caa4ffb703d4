#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilsphere/group.hpp"

namespace nilsphere {

// Multivariate polynomial with exact 64-bit integer coefficients in four
// variables (a, b, c, d).  The arithmetic is exact: the certificate below
// is a finite symbolic computation, not a floating-point one.
class IntPoly {
public:
    using Monomial = std::array<int, 4>;  // exponents of a, b, c, d

    IntPoly() = default;
    static IntPoly variable(int idx);
    static IntPoly constant(std::int64_t v);

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    bool operator==(const IntPoly& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::int64_t coefficient(const Monomial& m) const;
    double eval(double a, double b, double c, double d) const;
    std::string to_string() const;  // deterministic monomial order
    const std::map<Monomial, std::int64_t>& terms() const { return terms_; }

private:
    void prune();
    std::map<Monomial, std::int64_t> terms_;
};

// The one-parameter family of skew forms behind the distinguishing example:
// E_mu = mu1 I + mu2 N with N the companion matrix of s^4 + 1, embedded as
// the off-diagonal block pair of an 8x8 skew form J_mu.
Eigen::Matrix4d appendix_E(const Eigen::Vector2d& mu);
Eigen::MatrixXd appendix_J(const Eigen::Vector2d& mu);

struct AppendixDeterminant {
    double det_assembled = 0.0;  // det of the assembled 8x8 skew form
    double det_formula = 0.0;    // (mu1^4 + mu2^4)^2
};
AppendixDeterminant appendix_determinant(const Eigen::Vector2d& mu);

// For a group with the composition identity (J_i J_j + J_j J_i = -2 kappa
// delta_ij I), every J_w with |w| != 0 satisfies |det J_w| = (sqrt(kappa)
// |w|)^d; the pair below is measured vs predicted.
struct HTypeDetCheck {
    double det = 0.0;
    double predicted = 0.0;
};
HTypeDetCheck h_type_det_invariant(const StepTwoGroup& g, const Eigen::VectorXd& w);

// Certificate that no linear identification matches the determinant
// profile of the companion family to one with isotropic profile
// (mu1^2 + mu2^2)^2.  An identification would make
//   ((a mu1 + b mu2)^2 + (c mu1 + d mu2)^2)^2 = mu1^4 + mu2^4
// hold identically in mu; expanding in the monomial basis
// {mu1^4, mu1^3 mu2, mu1^2 mu2^2, mu1 mu2^3, mu2^4} and writing
// P = a^2 + c^2, Q = b^2 + d^2, rho = a b + c d, the coefficient
// equations reduce modulo P = Q = 1 to {4 rho = 0, 4 rho^2 + 2 = 0},
// which has no real solution.
struct CertificateRecord {
    std::vector<IntPoly> coefficients;  // the five coefficient differences
    bool reduction_matches = false;     // exact cofactor identities mod (P-1, Q-1)
    bool infeasible = false;            // 4 rho^2 + 2 P Q structure verified exactly
    double numeric_floor = 0.0;         // min over the admissible torus of the
                                        // largest coefficient magnitude (>= 2 here)
    double control_floor = 0.0;         // same search when the target profile is
                                        // attainable (vanishes at a grid point)
    int grid = 0;
    std::string to_json() const;
};
CertificateRecord non_isomorphism_certificate(int grid = 720, int threads = 0);

}  // namespace nilsphere
