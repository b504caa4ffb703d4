#include "nilsphere/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nilsphere/common.hpp"

namespace nilsphere {

IntPoly IntPoly::variable(int idx) {
    IntPoly p;
    Monomial m{0, 0, 0, 0};
    m[idx] = 1;
    p.terms_[m] = 1;
    return p;
}

IntPoly IntPoly::constant(std::int64_t v) {
    IntPoly p;
    if (v != 0) p.terms_[Monomial{0, 0, 0, 0}] = v;
    return p;
}

void IntPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    IntPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.terms_[m] += c;
    out.prune();
    return out;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    IntPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.terms_[m] -= c;
    out.prune();
    return out;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    IntPoly out;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m{m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]};
            out.terms_[m] += c1 * c2;
        }
    }
    out.prune();
    return out;
}

std::int64_t IntPoly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

double IntPoly::eval(double a, double b, double c, double d) const {
    double total = 0.0;
    for (const auto& [m, coef] : terms_) {
        double t = static_cast<double>(coef);
        for (int i = 0; i < m[0]; ++i) t *= a;
        for (int i = 0; i < m[1]; ++i) t *= b;
        for (int i = 0; i < m[2]; ++i) t *= c;
        for (int i = 0; i < m[3]; ++i) t *= d;
        total += t;
    }
    return total;
}

std::string IntPoly::to_string() const {
    if (terms_.empty()) return "0";
    static const char* names[4] = {"a", "b", "c", "d"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, coef] : terms_) {
        std::int64_t c = coef;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        std::int64_t mag = std::abs(c);
        bool has_var = m[0] + m[1] + m[2] + m[3] > 0;
        if (mag != 1 || !has_var) os << mag;
        for (int v = 0; v < 4; ++v) {
            if (m[v] == 0) continue;
            os << names[v];
            if (m[v] > 1) os << "^" << m[v];
        }
        first = false;
    }
    return os.str();
}

Eigen::Matrix4d appendix_E(const Eigen::Vector2d& mu) {
    Eigen::Matrix4d N = Eigen::Matrix4d::Zero();
    N(0, 3) = -1;
    N(1, 0) = 1;
    N(2, 1) = 1;
    N(3, 2) = 1;
    return mu[0] * Eigen::Matrix4d::Identity() + mu[1] * N;
}

Eigen::MatrixXd appendix_J(const Eigen::Vector2d& mu) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(8, 8);
    Eigen::Matrix4d E = appendix_E(mu);
    J.topRightCorner(4, 4) = E;
    J.bottomLeftCorner(4, 4) = -E.transpose();
    return J;
}

AppendixDeterminant appendix_determinant(const Eigen::Vector2d& mu) {
    AppendixDeterminant out;
    out.det_assembled = appendix_J(mu).determinant();
    double quartic = std::pow(mu[0], 4) + std::pow(mu[1], 4);
    out.det_formula = quartic * quartic;
    return out;
}

HTypeDetCheck h_type_det_invariant(const StepTwoGroup& g, const Eigen::VectorXd& w) {
    HTypeDetCheck out;
    out.det = std::abs(g.J_of(w).determinant());
    auto kappa = g.h_type_kappa();
    double k = kappa ? *kappa : std::numeric_limits<double>::quiet_NaN();
    out.predicted = std::pow(std::sqrt(k) * w.norm(), g.d());
    return out;
}

namespace {

// Coefficients of ((a mu1 + b mu2)^2 + (c mu1 + d mu2)^2)^2 in the basis
// {mu1^4, mu1^3 mu2, mu1^2 mu2^2, mu1 mu2^3, mu2^4}, as exact polynomials
// in (a, b, c, d): the square of the quadratic form [P, 2 rho, Q].
std::array<IntPoly, 5> quartic_coefficients() {
    IntPoly a = IntPoly::variable(0), b = IntPoly::variable(1);
    IntPoly c = IntPoly::variable(2), d = IntPoly::variable(3);
    IntPoly P = a * a + c * c;
    IntPoly Q = b * b + d * d;
    IntPoly two_rho = (a * b + c * d) * IntPoly::constant(2);
    std::array<IntPoly, 3> q = {P, two_rho, Q};
    std::array<IntPoly, 5> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i + j] = out[i + j] + q[i] * q[j];
    return out;
}

}  // namespace

CertificateRecord non_isomorphism_certificate(int grid, int threads) {
    (void)threads;
    CertificateRecord out;
    out.grid = grid;

    IntPoly a = IntPoly::variable(0), b = IntPoly::variable(1);
    IntPoly c = IntPoly::variable(2), d = IntPoly::variable(3);
    IntPoly P = a * a + c * c;
    IntPoly Q = b * b + d * d;
    IntPoly rho = a * b + c * d;
    IntPoly one = IntPoly::constant(1);

    std::array<IntPoly, 5> q4 = quartic_coefficients();
    // target profile mu1^4 + mu2^4: subtract from the outer coefficients
    std::array<IntPoly, 5> diff = q4;
    diff[0] = diff[0] - one;
    diff[4] = diff[4] - one;
    out.coefficients.assign(diff.begin(), diff.end());

    // exact cofactor identities: modulo the ideal (P - 1, Q - 1) the five
    // coefficient equations reduce to {4 rho = 0, 4 rho^2 + 2 = 0}
    IntPoly four_rho = IntPoly::constant(4) * rho;
    IntPoly two = IntPoly::constant(2);
    bool m0 = diff[0] == (P - one) * (P + one);
    bool m1 = (diff[1] - four_rho) == four_rho * (P - one);
    bool m2 = (diff[2] - (IntPoly::constant(4) * rho * rho + two)) ==
              two * ((P - one) * Q + (Q - one));
    bool m3 = (diff[3] - four_rho) == four_rho * (Q - one);
    bool m4 = diff[4] == (Q - one) * (Q + one);
    out.reduction_matches = m0 && m1 && m2 && m3 && m4;

    // the middle coefficient is exactly 4 rho^2 + 2 P Q: with P = Q = 1 it
    // is bounded below by 2 while the adjacent equation forces rho = 0, so
    // the reduced system has no real solution
    out.infeasible =
        out.reduction_matches && (q4[2] == IntPoly::constant(4) * rho * rho + two * P * Q);

    // numeric floor over the admissible torus P = Q = 1:
    // (a, c) = (cos alpha, sin alpha), (b, d) = (cos beta, sin beta)
    auto residual_at = [&](const std::array<IntPoly, 5>& coeffs, double alpha, double beta) {
        double av = std::cos(alpha), cv = std::sin(alpha);
        double bv = std::cos(beta), dv = std::sin(beta);
        double worst = 0.0;
        for (const auto& poly : coeffs) worst = std::max(worst, std::abs(poly.eval(av, bv, cv, dv)));
        return worst;
    };
    auto torus_floor = [&](const std::array<IntPoly, 5>& coeffs) {
        double best = std::numeric_limits<double>::infinity();
        double ba = 0.0, bb = 0.0;
        double step = 2.0 * pi / grid;
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                double v = residual_at(coeffs, i * step, j * step);
                if (v < best) {
                    best = v;
                    ba = i * step;
                    bb = j * step;
                }
            }
        }
        // one refinement pass around the grid argmin
        int fine = 50;
        for (int i = -fine; i <= fine; ++i) {
            for (int j = -fine; j <= fine; ++j) {
                double v = residual_at(coeffs, ba + i * step / fine, bb + j * step / fine);
                best = std::min(best, v);
            }
        }
        return best;
    };
    out.numeric_floor = torus_floor(diff);

    // control: the attainable target (mu1^2 + mu2^2)^2 must drive the same
    // search to zero (the identity map is a solution)
    std::array<IntPoly, 5> control = q4;
    control[0] = control[0] - one;
    control[2] = control[2] - two;
    control[4] = control[4] - one;
    out.control_floor = torus_floor(control);
    return out;
}

std::string CertificateRecord::to_json() const {
    nlohmann::json j;
    static const char* basis[5] = {"mu1^4", "mu1^3 mu2", "mu1^2 mu2^2", "mu1 mu2^3", "mu2^4"};
    auto& arr = j["coefficient_equations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        nlohmann::json e;
        e["basis"] = basis[i];
        e["polynomial"] = coefficients[i].to_string();
        arr.push_back(e);
    }
    j["reduced_system"] = {"4 rho = 0", "4 rho^2 + 2 = 0"};
    j["reduction_matches"] = reduction_matches;
    j["infeasible_over_R"] = infeasible;
    j["numeric_floor"] = numeric_floor;
    j["control_floor"] = control_floor;
    j["grid"] = grid;
    return j.dump(2);
}

}  // namespace nilsphere
