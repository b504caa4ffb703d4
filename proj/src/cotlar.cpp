#include "nilsphere/cotlar.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace nilsphere {

namespace {

double op_norm(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

Eigen::MatrixXcd random_unitary(Rng& rng, int dim) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cd(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    // fix column phases so Q is deterministic given the input
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        cd d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

}  // namespace

OperatorFamily make_banded_family(Rng& rng, int dim, int count, int width,
                                  double amplitude) {
    OperatorFamily fam;
    fam.eps = 0.5;
    const Eigen::MatrixXcd u = random_unitary(rng, dim);
    const int qshift = rng.uniform_int(0, dim / 2);
    for (int n = 0; n < count; ++n) {
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
        // rows restricted to window [n, n+width), columns to the shifted one
        for (int r = 0; r < width; ++r) {
            const int row = (n + r) % dim;
            for (int c = 0; c < width; ++c) {
                const int col = (n + qshift + c) % dim;
                t(row, col) = amplitude * u(row, col);
            }
        }
        // renormalize so ||T_n|| = amplitude exactly
        const double nn = op_norm(t);
        if (nn > 0) t *= amplitude / nn;
        fam.ops.push_back(std::move(t));
    }
    return fam;
}

OperatorFamily make_random_family(Rng& rng, int dim, int count) {
    OperatorFamily fam;
    fam.eps = 0.5;
    for (int n = 0; n < count; ++n) {
        Eigen::MatrixXcd g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                g(i, j) = cd(rng.normal(), rng.normal()) / std::sqrt(2.0 * dim);
        fam.ops.push_back(std::move(g));
    }
    return fam;
}

CotlarCheck cotlar_check(const OperatorFamily& fam, Rng& rng, int probes) {
    CotlarCheck out;
    const int nt = static_cast<int>(fam.ops.size());
    const int dim = static_cast<int>(fam.ops[0].rows());
    const double eps = fam.eps;

    for (const auto& t : fam.ops) out.A = std::max(out.A, op_norm(t));
    // smallest B consistent with the decay hypothesis, then inflated
    double b2 = 0.0;
    for (int n = 0; n < nt; ++n)
        for (int np = 0; np < nt; ++np) {
            const double w = std::pow(2.0, eps * std::abs(n - np));
            b2 = std::max(b2, op_norm(fam.ops[n] * fam.ops[np].adjoint()) * w);
            b2 = std::max(b2, op_norm(fam.ops[n].adjoint() * fam.ops[np]) * w);
        }
    out.B = std::max(2.0 * out.A, std::sqrt(b2));
    out.hypotheses_ok = true;  // by construction of B

    // rhs factor A * sum_{m in Z} min(A, B 2^{-eps|m|}) in closed form
    const int m0 = static_cast<int>(std::ceil(std::log2(out.B / out.A) / eps));
    const double tail = 2.0 * out.B * std::pow(2.0, -eps * (m0 + 1)) /
                        (1.0 - std::pow(2.0, -eps));
    out.rhs_factor = out.A * ((2.0 * m0 + 1) * out.A + tail);

    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : fam.ops) q += t.adjoint() * t;

    auto ratio_for = [&](const Eigen::VectorXcd& f) {
        double lhs = 0.0;
        for (const auto& t : fam.ops) lhs += (t * f).squaredNorm();
        return lhs / (out.rhs_factor * f.squaredNorm());
    };

    for (int p = 0; p < probes; ++p) {
        Eigen::VectorXcd f(dim);
        for (int i = 0; i < dim; ++i) f(i) = cd(rng.normal(), rng.normal());
        out.worst_ratio = std::max(out.worst_ratio, ratio_for(f));
    }
    {
        // strongest probe: top eigenvector of sum T_n^* T_n by power iteration
        Eigen::VectorXcd f(dim);
        for (int i = 0; i < dim; ++i) f(i) = cd(rng.normal(), rng.normal());
        f.normalize();
        for (int it = 0; it < 60; ++it) f = (q * f).normalized();
        out.worst_ratio = std::max(out.worst_ratio, ratio_for(f));
    }
    out.pass = out.worst_ratio <= 1.0 + 1e-9;
    return out;
}

}  // namespace nilsphere
