#include "nilsphere/group.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace nilsphere {

StepTwoGroup::StepTwoGroup(int d, int m, std::vector<Eigen::MatrixXd> J, std::string label)
    : d_(d), m_(m), J_(std::move(J)), label_(std::move(label)) {
    if (d_ < 1 || m_ < 1) throw std::invalid_argument("group: need d, m >= 1");
    if (static_cast<int>(J_.size()) != m_) throw std::invalid_argument("group: need m matrices");
    for (const auto& Ji : J_) {
        if (Ji.rows() != d_ || Ji.cols() != d_)
            throw std::invalid_argument("group: J matrices must be d x d");
        if ((Ji + Ji.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("group: J matrices must be skew-symmetric");
    }
}

Eigen::VectorXd StepTwoGroup::commutator(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) const {
    Eigen::VectorXd w(m_);
    for (int i = 0; i < m_; ++i) w[i] = x.dot(J_[i] * y);
    return w;
}

Eigen::MatrixXd StepTwoGroup::J_of(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d_, d_);
    for (int i = 0; i < m_; ++i) M += u[i] * J_[i];
    return M;
}

GroupElement StepTwoGroup::multiply(const GroupElement& a, const GroupElement& b) const {
    return {a.x + b.x, a.u + b.u + commutator(a.x, b.x)};
}

GroupElement StepTwoGroup::inverse(const GroupElement& a) const { return {-a.x, -a.u}; }

GroupElement StepTwoGroup::identity() const {
    return {Eigen::VectorXd::Zero(d_), Eigen::VectorXd::Zero(m_)};
}

GroupElement StepTwoGroup::dilate(double t, const GroupElement& a) const {
    return {t * a.x, t * t * a.u};
}

StepTwoGroup StepTwoGroup::conjugate_by_rotation(const Eigen::MatrixXd& Q) const {
    if (Q.rows() != d_ || Q.cols() != d_) throw std::invalid_argument("rotation: wrong size");
    if ((Q.transpose() * Q - Eigen::MatrixXd::Identity(d_, d_)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("rotation: Q must be orthogonal");
    std::vector<Eigen::MatrixXd> J2;
    J2.reserve(m_);
    for (const auto& Ji : J_) {
        Eigen::MatrixXd M = Q.transpose() * Ji * Q;
        M = 0.5 * (M - M.transpose().eval());  // strip roundoff asymmetry
        J2.push_back(M);
    }
    return StepTwoGroup(d_, m_, std::move(J2), label_ + "_rot");
}

namespace {

// extreme singular values of J_u over the unit sphere |u| = 1, by a dense
// angular scan plus local golden-section refinement (m <= 3 in practice)
struct SphereScan {
    double min_sv = 0.0, max_sv = 0.0;
};

SphereScan scan_sphere(const StepTwoGroup& G) {
    SphereScan out;
    int m = G.m();
    auto sv_of = [&](const Eigen::VectorXd& u) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(G.J_of(u));
        return std::pair<double, double>(svd.singularValues().minCoeff(),
                                         svd.singularValues().maxCoeff());
    };
    if (m == 1) {
        Eigen::VectorXd u(1);
        u[0] = 1.0;
        auto [lo, hi] = sv_of(u);
        out.min_sv = lo;
        out.max_sv = hi;
        return out;
    }
    if (m == 2) {
        const int n = 4096;
        double best_lo = 1e300, best_hi = -1e300, phi_lo = 0, phi_hi = 0;
        for (int i = 0; i < n; ++i) {
            double phi = pi * i / n;  // J_{-u} = -J_u shares singular values
            Eigen::VectorXd u(2);
            u << std::cos(phi), std::sin(phi);
            auto [lo, hi] = sv_of(u);
            if (lo < best_lo) { best_lo = lo; phi_lo = phi; }
            if (hi > best_hi) { best_hi = hi; phi_hi = phi; }
        }
        // golden-section polish around the best angles
        auto polish = [&](double phic, bool want_min) {
            double a = phic - pi / n, b = phic + pi / n;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            auto f = [&](double phi) {
                Eigen::VectorXd u(2);
                u << std::cos(phi), std::sin(phi);
                auto [lo, hi] = sv_of(u);
                return want_min ? lo : -hi;
            };
            double c = b - gr * (b - a), d = a + gr * (b - a);
            double fc = f(c), fd = f(d);
            for (int it = 0; it < 60; ++it) {
                if (fc < fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = f(c); }
                else { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = f(d); }
            }
            double v = f(0.5 * (a + b));
            return want_min ? v : -v;
        };
        out.min_sv = polish(phi_lo, true);
        out.max_sv = polish(phi_hi, false);
        return out;
    }
    // m >= 3: Fibonacci sphere scan plus a local pattern search
    const int n = 16384;
    Eigen::VectorXd ulo, uhi;
    double best_lo = 1e300, best_hi = -1e300;
    const double ga = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = ga * i;
        Eigen::VectorXd u(3);
        u << r * std::cos(th), r * std::sin(th), z;
        if (m > 3) {
            Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
            w.head(3) = u;
            u = w;
        }
        auto [lo, hi] = sv_of(u);
        if (lo < best_lo) { best_lo = lo; ulo = u; }
        if (hi > best_hi) { best_hi = hi; uhi = u; }
    }
    auto polish = [&](Eigen::VectorXd u, bool want_min) {
        double step = 2.0 / std::sqrt(static_cast<double>(n));
        auto f = [&](const Eigen::VectorXd& w) {
            Eigen::VectorXd un = w.normalized();
            auto [lo, hi] = sv_of(un);
            return want_min ? lo : -hi;
        };
        double fu = f(u);
        for (int it = 0; it < 200 && step > 1e-12; ++it) {
            bool improved = false;
            for (int a = 0; a < u.size(); ++a) {
                for (double sgn : {1.0, -1.0}) {
                    Eigen::VectorXd w = u;
                    w[a] += sgn * step;
                    double fw = f(w);
                    if (fw < fu) { u = w.normalized(); fu = fw; improved = true; }
                }
            }
            if (!improved) step *= 0.5;
        }
        return want_min ? fu : -fu;
    };
    out.min_sv = polish(ulo, true);
    out.max_sv = polish(uhi, false);
    return out;
}

}  // namespace

StepTwoGroup::Constants StepTwoGroup::nondegeneracy_constants() const {
    SphereScan s = scan_sphere(*this);
    return {s.min_sv, s.max_sv};
}

bool StepTwoGroup::is_metivier(double tol) const {
    return nondegeneracy_constants().c0 > tol;
}

std::optional<double> StepTwoGroup::h_type_kappa(double tol) const {
    // kappa from J_1^2 = -kappa I, then check the full polarization relations
    Eigen::MatrixXd J1sq = J_[0] * J_[0];
    double kappa = -J1sq(0, 0);
    if (kappa <= 0) return std::nullopt;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d_, d_);
    for (int i = 0; i < m_; ++i)
        for (int j = i; j < m_; ++j) {
            Eigen::MatrixXd anti = J_[i] * J_[j] + J_[j] * J_[i];
            Eigen::MatrixXd target = (i == j) ? (-2.0 * kappa * I).eval()
                                              : Eigen::MatrixXd::Zero(d_, d_).eval();
            if ((anti - target).cwiseAbs().maxCoeff() > tol * std::max(1.0, kappa))
                return std::nullopt;
        }
    return kappa;
}

std::string StepTwoGroup::to_json() const {
    nlohmann::json j;
    j["d"] = d_;
    j["m"] = m_;
    j["label"] = label_;
    auto& arr = j["J"] = nlohmann::json::array();
    for (const auto& Ji : J_) {
        std::vector<double> flat(static_cast<std::size_t>(d_) * d_);
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) flat[static_cast<std::size_t>(r) * d_ + c] = Ji(r, c);
        arr.push_back(flat);
    }
    return j.dump(2);
}

StepTwoGroup StepTwoGroup::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int d = j.at("d").get<int>();
    int m = j.at("m").get<int>();
    std::string label = j.value("label", std::string("custom"));
    std::vector<Eigen::MatrixXd> J;
    for (const auto& flat_j : j.at("J")) {
        auto flat = flat_j.get<std::vector<double>>();
        if (static_cast<int>(flat.size()) != d * d)
            throw std::invalid_argument("group json: J entry has wrong length");
        Eigen::MatrixXd M(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) M(r, c) = flat[static_cast<std::size_t>(r) * d + c];
        J.push_back(M);
    }
    return StepTwoGroup(d, m, std::move(J), std::move(label));
}

StepTwoGroup heisenberg_group(int n, bool doubled) {
    int d = 2 * n;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
    J.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    if (doubled) J *= 2.0;
    return StepTwoGroup(d, 1, {J}, doubled ? "heisenberg_doubled" : "heisenberg");
}

namespace {
Eigen::MatrixXd companion_fourth_root() {
    // N with N^4 = -I (companion matrix of s^4 + 1)
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(4, 4);
    N(0, 3) = -1;
    N(1, 0) = 1;
    N(2, 1) = 1;
    N(3, 2) = 1;
    return N;
}

Eigen::MatrixXd off_diagonal_pair(const Eigen::MatrixXd& E) {
    int n = static_cast<int>(E.rows());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = E;
    J.bottomLeftCorner(n, n) = -E.transpose();
    return J;
}
}  // namespace

StepTwoGroup appendix_group() {
    Eigen::MatrixXd E1 = Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd E2 = companion_fourth_root();
    return StepTwoGroup(8, 2, {off_diagonal_pair(E1), off_diagonal_pair(E2)}, "appendix");
}

StepTwoGroup htype_companion_group() {
    Eigen::MatrixXd E1 = Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4);  // skew-orthogonal, K^2 = -I
    K(0, 1) = -1; K(1, 0) = 1; K(2, 3) = -1; K(3, 2) = 1;
    return StepTwoGroup(8, 2, {off_diagonal_pair(E1), off_diagonal_pair(K)}, "htype_8_2");
}

StepTwoGroup quaternionic_group() {
    Eigen::MatrixXd Li(4, 4), Lj(4, 4), Lk(4, 4);
    Li << 0, -1, 0, 0,
          1, 0, 0, 0,
          0, 0, 0, -1,
          0, 0, 1, 0;
    Lj << 0, 0, -1, 0,
          0, 0, 0, 1,
          1, 0, 0, 0,
          0, -1, 0, 0;
    Lk << 0, 0, 0, -1,
          0, 0, -1, 0,
          0, 1, 0, 0,
          1, 0, 0, 0;
    return StepTwoGroup(4, 3, {Li, Lj, Lk}, "quaternionic");
}

StepTwoGroup abelian_group(int d, int m) {
    std::vector<Eigen::MatrixXd> J(m, Eigen::MatrixXd::Zero(d, d));
    return StepTwoGroup(d, m, std::move(J), "abelian");
}

}  // namespace nilsphere
