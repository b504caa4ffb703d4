#include "nilsphere/fold.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace nilsphere {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// pieces of the separated phase, all functions of the base point
struct PhasePieces {
    VectorXd xi;      // xi_i = e_d^t J_i y + Lambda_{id}
    double g0 = 0.0;  // -(y_d + Gamma(x'-y'))
    VectorXd h0;      // h0_i = -v_i + e_i^t Lambda P^t (x'-y') - Lambda_{id} y_d + (x',0)^t J_i y
};

PhasePieces phase_pieces(const FoldConfig& fc, const PhasePoint& p) {
    const int d = fc.d(), m = fc.m();
    PhasePieces out;
    out.xi.resize(m);
    out.h0.resize(m);
    const VectorXd dxp = p.x.head(d - 1) - p.y.head(d - 1);
    const double gam = fc.surface.gamma(dxp);
    out.g0 = -(p.y(d - 1) + gam);
    VectorXd x_flat = p.x;
    x_flat(d - 1) = 0.0;
    for (int i = 0; i < m; ++i) {
        const MatrixXd& ji = fc.group.J(i);
        out.xi(i) = ji.row(d - 1).dot(p.y) + fc.Lambda(i, d - 1);
        out.h0(i) = -p.v(i) + fc.Lambda.row(i).head(d - 1).dot(dxp) -
                    fc.Lambda(i, d - 1) * p.y(d - 1) + x_flat.dot(ji * p.y);
    }
    return out;
}

}  // namespace

double fold_phase(const FoldConfig& fc, const PhasePoint& p, double z,
                  const VectorXd& w, const VectorXd& tau, double sigma) {
    const PhasePieces pc = phase_pieces(fc, p);
    const double alpha = sigma + tau.dot(pc.xi) - p.x(fc.d() - 1);
    return z * alpha + w.dot(tau - p.u) + sigma * pc.g0 + tau.dot(pc.h0);
}

CriticalTheta critical_theta(const FoldConfig& fc, const PhasePoint& p) {
    const int d = fc.d(), m = fc.m();
    const PhasePieces pc = phase_pieces(fc, p);
    CriticalTheta th;
    th.z = -pc.g0;  // y_d + Gamma(x'-y')
    th.tau = p.u;
    th.sigma = p.x(d - 1) - p.u.dot(pc.xi);
    th.w.resize(m);
    for (int i = 0; i < m; ++i) th.w(i) = -th.z * pc.xi(i) - pc.h0(i);
    return th;
}

double critical_value(const FoldConfig& fc, const PhasePoint& p) {
    const PhasePieces pc = phase_pieces(fc, p);
    const double sigma_c = p.x(fc.d() - 1) - p.u.dot(pc.xi);
    return sigma_c * pc.g0 + p.u.dot(pc.h0);
}

double sigma_cr(const FoldConfig& fc, const PhasePoint& p) {
    const PhasePieces pc = phase_pieces(fc, p);
    return p.x(fc.d() - 1) - p.u.dot(pc.xi);
}

Eigen::MatrixXd theta_hessian(const FoldConfig& fc, const PhasePoint& p) {
    const int m = fc.m();
    const PhasePieces pc = phase_pieces(fc, p);
    MatrixXd h = MatrixXd::Zero(2 * m + 2, 2 * m + 2);
    const int iz = 0, iw = 1, itau = 1 + m, isig = 1 + 2 * m;
    h(iz, isig) = h(isig, iz) = 1.0;
    for (int i = 0; i < m; ++i) {
        h(iz, itau + i) = h(itau + i, iz) = pc.xi(i);
        h(iw + i, itau + i) = h(itau + i, iw + i) = 1.0;
    }
    return h;
}

ThetaHessianInvariants theta_hessian_invariants(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    ThetaHessianInvariants out;
    out.det = 1.0;
    for (int i = 0; i < h.rows(); ++i) {
        out.det *= es.eigenvalues()(i);
        out.signature += es.eigenvalues()(i) > 0 ? 1 : -1;
    }
    return out;
}

Eigen::MatrixXd mixed_hessian(const FoldConfig& fc, const PhasePoint& p) {
    const int d = fc.d(), m = fc.m();
    const VectorXd dxp = p.x.head(d - 1) - p.y.head(d - 1);
    const double gam = fc.surface.gamma(dxp);
    const VectorXd b = fc.surface.grad_gamma(dxp);
    const MatrixXd a = fc.surface.hess_gamma(dxp);
    const MatrixXd ju = fc.group.J_of(p.u);
    const double sc = sigma_cr(fc, p);

    // P projects onto the first d-1 coordinates
    const MatrixXd ju_tt = ju.topLeftCorner(d - 1, d - 1);      // P J_u P^t
    const VectorXd ju_td = ju.col(d - 1).head(d - 1);           // P J_u e_d
    const Eigen::RowVectorXd ju_dt = ju.row(d - 1).head(d - 1); // e_d^t J_u P^t

    MatrixXd h = MatrixXd::Zero(d + m, d + m);
    h.topLeftCorner(d - 1, d - 1) = sc * a + ju_tt + b * ju_dt;
    h.block(0, d - 1, d - 1, 1) = ju_td;
    h.block(d - 1, 0, 1, d - 1) = b.transpose();
    h(d - 1, d - 1) = -1.0;
    VectorXd x_flat = p.x;
    x_flat(d - 1) = 0.0;
    for (int i = 0; i < m; ++i) {
        const MatrixXd& ji = fc.group.J(i);
        // d/dy' of dPhi/du_i
        Eigen::RowVectorXd r = x_flat.transpose() * ji * MatrixXd::Identity(d, d).leftCols(d - 1);
        r += (p.y(d - 1) + gam) * ji.row(d - 1).head(d - 1);
        r -= (ji.row(d - 1).dot(p.y) + fc.Lambda(i, d - 1)) * b.transpose();
        r -= fc.Lambda.row(i).head(d - 1);
        h.block(d + i, 0, 1, d - 1) = r;
        // d/dy_d of dPhi/du_i
        h(d + i, d - 1) = x_flat.dot(ji.col(d - 1)) + ji.row(d - 1).dot(p.y);
        h(d + i, d + i) = -1.0;
    }
    return h;
}

double mixed_hessian_det_factored(const FoldConfig& fc, const PhasePoint& p) {
    const int d = fc.d(), m = fc.m();
    const VectorXd dxp = p.x.head(d - 1) - p.y.head(d - 1);
    const VectorXd b = fc.surface.grad_gamma(dxp);
    const MatrixXd a = fc.surface.hess_gamma(dxp);
    const MatrixXd ju = fc.group.J_of(p.u);
    const double sc = sigma_cr(fc, p);

    const MatrixXd ju_tt = ju.topLeftCorner(d - 1, d - 1);
    const VectorXd ju_td = ju.col(d - 1).head(d - 1);
    const Eigen::RowVectorXd ju_dt = ju.row(d - 1).head(d - 1);
    const MatrixXd core =
        sc * a + ju_tt + b * ju_dt + ju_td * b.transpose();  // E(B) symmetrized in
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;           // (-1)^{m+1}
    if (d == 2) return sign * core(0, 0);
    return sign * core.determinant();
}

double rho_value(const FoldConfig& fc, const PhasePoint& p, double sigma,
                 const VectorXd& tau) {
    const int d = fc.d(), m = fc.m();
    const VectorXd dxp = p.x.head(d - 1) - p.y.head(d - 1);
    double r = sigma * (-p.x(d - 1) + p.y(d - 1) + dxp.dot(fc.surface.grad_gamma(dxp)));
    for (int i = 0; i < m; ++i)
        r += 2.0 * tau(i) * (-p.u(i) + p.v(i) - p.x.dot(fc.group.J(i) * p.y));
    r += tau.dot(fc.Lambda * (p.x - p.y));
    return r;
}

HessianCheck check_mixed_hessian(const FoldConfig& fc, const PhasePoint& p,
                                 double fd_step) {
    const int d = fc.d(), m = fc.m();
    const MatrixXd h = mixed_hessian(fc, p);
    const double det_direct = h.determinant();
    const double det_factored = mixed_hessian_det_factored(fc, p);
    HessianCheck out;
    const double det_scale = std::max({std::abs(det_direct), std::abs(det_factored), 1e-12});
    out.factor_rel_err = std::abs(det_direct - det_factored) / det_scale;

    auto phi_at = [&](const VectorXd& xu, const VectorXd& yv) {
        PhasePoint q = p;
        q.x = xu.head(d);
        q.u = xu.tail(m);
        q.y = yv.head(d);
        q.v = yv.tail(m);
        return critical_value(fc, q);
    };
    VectorXd xu(d + m), yv(d + m);
    xu << p.x, p.u;
    yv << p.y, p.v;
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
    for (int i = 0; i < d + m; ++i)
        for (int j = 0; j < d + m; ++j) {
            VectorXd xp_ = xu, xm_ = xu, yp_ = yv, ym_ = yv;
            xp_(i) += fd_step;
            xm_(i) -= fd_step;
            yp_(j) += fd_step;
            ym_(j) -= fd_step;
            const double fd = (phi_at(xp_, yp_) - phi_at(xp_, ym_) - phi_at(xm_, yp_) +
                               phi_at(xm_, ym_)) /
                              (4.0 * fd_step * fd_step);
            out.fd_max_rel_err = std::max(out.fd_max_rel_err, std::abs(fd - h(i, j)) / scale);
        }
    return out;
}

double fold_xd(const FoldConfig& fc, const PhasePoint& p) {
    // sigma_cr = x_d - u . xi with xi independent of x_d
    const PhasePieces pc = phase_pieces(fc, p);
    return p.u.dot(pc.xi);
}

FoldPointCheck check_fold_point(const FoldConfig& fc, const PhasePoint& p) {
    const int d = fc.d(), m = fc.m();
    const MatrixXd h = mixed_hessian(fc, p);
    Eigen::JacobiSVD<MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    FoldPointCheck out;
    const auto& s = svd.singularValues();
    out.sigma_max = s(0);
    out.sigma_second = s(d + m - 2);
    out.sigma_min = s(d + m - 1);
    const VectorXd vl = svd.matrixV().col(d + m - 1);  // right null: (y,v) direction
    const VectorXd vr = svd.matrixU().col(d + m - 1);  // left null: (x,u) direction

    auto det_at = [&](const PhasePoint& q) { return mixed_hessian(fc, q).determinant(); };
    const double hstep = 1e-5;
    {
        PhasePoint qp = p, qm = p;
        qp.y += hstep * vl.head(d);
        qp.v += hstep * vl.tail(m);
        qm.y -= hstep * vl.head(d);
        qm.v -= hstep * vl.tail(m);
        out.transversal_left = std::abs(det_at(qp) - det_at(qm)) / (2.0 * hstep);
    }
    {
        PhasePoint qp = p, qm = p;
        qp.x += hstep * vr.head(d);
        qp.u += hstep * vr.tail(m);
        qm.x -= hstep * vr.head(d);
        qm.u -= hstep * vr.tail(m);
        out.transversal_right = std::abs(det_at(qp) - det_at(qm)) / (2.0 * hstep);
    }
    return out;
}

KernelDirectionCheck check_kernel_direction(const StepTwoGroup& g,
                                            const VectorXd& u, const VectorXd& b) {
    const int d = g.d();
    const MatrixXd ju = g.J_of(u);
    const MatrixXd ju_tt = ju.topLeftCorner(d - 1, d - 1);
    const VectorXd ju_td = ju.col(d - 1).head(d - 1);
    const Eigen::RowVectorXd ju_dt = ju.row(d - 1).head(d - 1);
    const MatrixXd mker = ju_tt + b * ju_dt + ju_td * b.transpose();

    KernelDirectionCheck out;
    const double unorm = u.norm();
    if (d == 2) {
        // 1x1 zero matrix: the kernel is the whole line
        out.kernel_component = std::abs(ju_dt(0)) / unorm;
        out.smallest_nonzero = -1.0;
        return out;
    }
    Eigen::JacobiSVD<MatrixXd> svd(mker, Eigen::ComputeFullV);
    const VectorXd w = svd.matrixV().col(d - 2);  // null direction of the skew matrix
    out.kernel_component = std::abs(ju_dt.dot(w)) / (unorm * w.norm());
    out.smallest_nonzero = svd.singularValues()(d - 3) / unorm;
    return out;
}

SkewResolventCheck check_skew_resolvent(const MatrixXd& a, const MatrixXd& s,
                                        double sigma) {
    SkewResolventCheck out;
    const int n = static_cast<int>(a.rows());
    const MatrixXd mat = sigma * a + s;
    Eigen::JacobiSVD<MatrixXd> svd(mat);
    const double smin = svd.singularValues()(n - 1);
    Eigen::SelfAdjointEigenSolver<MatrixXd> ea(a);
    const double lam_min = ea.eigenvalues()(0);
    const double lam_max = ea.eigenvalues()(n - 1);
    // part (a): sigma_min(sigma A + S) >= |sigma| lambda_min(A)
    out.part_a = smin >= std::abs(sigma) * lam_min * (1.0 - 1e-10);
    // part (b): with S invertible and |sigma| <= 1/(2 ||A|| ||S^{-1}||),
    // sigma_min(sigma A + S) >= sigma_min(S) / 2
    Eigen::JacobiSVD<MatrixXd> svs(s);
    const double s_min = svs.singularValues()(n - 1);
    if (n % 2 == 0 && s_min > 1e-10 &&
        std::abs(sigma) <= 1.0 / (2.0 * lam_max * (1.0 / s_min))) {
        out.part_b = smin >= 0.5 * s_min * (1.0 - 1e-10);
    } else {
        out.part_b = true;
    }
    return out;
}

DoubleRootCheck check_double_root(const MatrixXd& a, const MatrixXd& s, double h) {
    const int n = static_cast<int>(a.rows());
    if (n % 2 == 0) throw std::invalid_argument("check_double_root: odd dimension required");
    Eigen::JacobiSVD<MatrixXd> svd(s, Eigen::ComputeFullV);
    const VectorXd e = svd.matrixV().col(n - 1);  // unit kernel of S
    const MatrixXd q = svd.matrixV().leftCols(n - 1);
    const double aee = e.dot(a * e);

    auto p_of = [&](double sig) {
        const MatrixXd full = sig * a + s;
        const MatrixXd red = q.transpose() * full * q;
        return full.determinant() - sig * aee * red.determinant();
    };
    DoubleRootCheck out;
    out.p0 = std::abs(p_of(0.0));
    const double p1 = p_of(h), p2 = p_of(2 * h), pm1 = p_of(-h), pm2 = p_of(-2 * h);
    out.dp0_fd = std::abs((-p2 + 8.0 * p1 - 8.0 * pm1 + pm2) / (12.0 * h));
    out.scale = (std::abs(p1) + std::abs(p2) + std::abs(pm1) + std::abs(pm2)) / h + 1e-30;
    return out;
}

}  // namespace nilsphere
