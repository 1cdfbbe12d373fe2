#include "kgprop/evolution.hpp"

#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace kgp {

namespace odeint = boost::numeric::odeint;

namespace {

struct ModeFn {
    Eigen::VectorXd lam;
    Mat V;
    Eigen::VectorXd a;
};

ModeFn decompose(const StaticModel& m)
{
    const Eigen::Index n = m.L.rows();
    if (n == 0 || m.L.cols() != n) throw Error(ErrorCode::InvalidArgument, "L must be square");
    if ((m.L - m.L.adjoint()).norm() > 1e-12 * std::max(1.0, m.L.norm()))
        throw Error(ErrorCode::InvalidArgument, "L must be Hermitian");
    Eigen::VectorXd a = m.lapse.size() ? m.lapse : Eigen::VectorXd::Ones(n);
    if (a.size() != n) throw Error(ErrorCode::InvalidArgument, "lapse has the wrong length");
    if ((a.array() <= 0.0).any()) throw Error(ErrorCode::InvalidArgument, "lapse must be positive");
    Eigen::SelfAdjointEigenSolver<Mat> es(m.L);
    return {es.eigenvalues(), es.eigenvectors(), a};
}

Mat assemble(const ModeFn& d, const Eigen::VectorXcd& f)
{
    Mat core = d.V * f.asDiagonal() * d.V.adjoint();
    return d.a.asDiagonal() * core * d.a.asDiagonal();
}

double zero_tol(const Eigen::VectorXd& lam)
{
    return 1e-13 * std::max(1.0, lam.cwiseAbs().maxCoeff());
}

cplx sinc_mode(double lam, double tau)
{
    if (lam > 0.0) {
        double w = std::sqrt(lam);
        return std::sin(w * tau) / w;
    }
    if (lam < 0.0) {
        double k = std::sqrt(-lam);
        return std::sinh(k * tau) / k;
    }
    return tau;
}

bool is_classical(PropagatorKind k)
{
    return k == PropagatorKind::PJ || k == PropagatorKind::Ret || k == PropagatorKind::Adv;
}

}  // namespace

Mat tachyonic_classical(const StaticModel& model, PropagatorKind kind, double t, double s)
{
    if (!is_classical(kind)) throw Error(ErrorCode::StabilityRequired, "only PJ, Ret, Adv exist for indefinite L");
    ModeFn d = decompose(model);
    const double tau = t - s;
    double weight = 1.0;
    if (kind == PropagatorKind::Ret) weight = heaviside(tau);
    if (kind == PropagatorKind::Adv) weight = -heaviside(-tau);
    Eigen::VectorXcd f(d.lam.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = weight * sinc_mode(d.lam(i), tau);
    return assemble(d, f);
}

Mat static_kernels(const StaticModel& model, PropagatorKind kind, double t, double s)
{
    if (is_classical(kind)) return tachyonic_classical(model, kind, t, s);
    ModeFn d = decompose(model);
    const double tau = t - s, at = std::abs(tau);
    const double tol = zero_tol(d.lam);
    const Eigen::Index n = d.lam.size();
    Eigen::VectorXcd f(n);

    if (kind == PropagatorKind::OpF || kind == PropagatorKind::OpFbar) {
        const double sg = kind == PropagatorKind::OpF ? 1.0 : -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double lam = d.lam(i);
            if (std::abs(lam) <= tol) throw Error(ErrorCode::ZeroModePresent, "L has a zero mode");
            if (lam > 0.0) {
                double w = std::sqrt(lam);
                f(i) = sg * I * std::exp(-sg * I * w * at) / (2.0 * w);
            } else {
                double k = std::sqrt(-lam);
                f(i) = -std::exp(-k * at) / (2.0 * k);
            }
        }
        return assemble(d, f);
    }

    if (d.lam.minCoeff() <= tol)
        throw Error(ErrorCode::StabilityRequired, "frequency-split kernels need L positive definite");
    for (Eigen::Index i = 0; i < n; ++i) {
        double w = std::sqrt(d.lam(i));
        switch (kind) {
        case PropagatorKind::Pos:
            f(i) = std::exp(-I * w * tau) / (2.0 * w);
            break;
        case PropagatorKind::Neg:
            f(i) = std::exp(I * w * tau) / (2.0 * w);
            break;
        case PropagatorKind::Sym:
            f(i) = std::cos(w * tau) / w;
            break;
        case PropagatorKind::F:
            f(i) = I * std::exp(-I * w * at) / (2.0 * w);
            break;
        case PropagatorKind::Fbar:
            f(i) = -I * std::exp(I * w * at) / (2.0 * w);
            break;
        default:
            throw Error(ErrorCode::InvalidArgument, "kernel kind not defined for static models");
        }
    }
    return assemble(d, f);
}

Mat first_order_generator(const Mat& W, const Mat& L)
{
    const Eigen::Index n = L.rows();
    Mat B(2 * n, 2 * n);
    B << W, Mat::Identity(n, n), L, W.adjoint();
    return B;
}

Mat kg_form(Eigen::Index n)
{
    Mat Q = Mat::Zero(2 * n, 2 * n);
    Q.topRightCorner(n, n) = Mat::Identity(n, n);
    Q.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return Q;
}

Mat dynamics(const DynamicsFamily& family, double t, double s)
{
    const Eigen::Index N = 2 * family.n();
    if (N == 0) throw Error(ErrorCode::InvalidArgument, "empty dynamics family");
    std::vector<cplx> x(std::size_t(N * N), 0.0);
    for (Eigen::Index i = 0; i < N; ++i) x[std::size_t(i * N + i)] = 1.0;
    if (t == s) return Mat::Identity(N, N);
    auto sys = [&](const std::vector<cplx>& y, std::vector<cplx>& dy, double tt) {
        Mat B = family.B(tt);
        Eigen::Map<const Mat> Y(y.data(), N, N);
        Eigen::Map<Mat> dY(dy.data(), N, N);
        dY.noalias() = cplx(0.0, -1.0) * B * Y;
    };
    double dt = std::copysign(std::min(0.01, std::abs(t - s)), t - s);
    try {
        odeint::integrate_adaptive(
            odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<std::vector<cplx>>()), sys, x, s, t,
            dt);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SolverDiverged, e.what());
    }
    Mat R = Eigen::Map<Mat>(x.data(), N, N);
    if (!R.allFinite()) throw Error(ErrorCode::SolverDiverged, "dynamics overflowed");
    return R;
}

Mat positive_spectral_projection(const Mat& B)
{
    const Eigen::Index N = B.rows();
    Eigen::JacobiSVD<Mat> svd(B);
    const auto& sv = svd.singularValues();
    if (sv(N - 1) <= 1e-12 * sv(0)) throw Error(ErrorCode::ZeroModePresent, "generator has a zero mode");
    Mat X = B;
    for (int it = 0; it < 200; ++it) {
        Mat Xn = 0.5 * (X + X.inverse());
        double delta = (Xn - X).norm();
        X = Xn;
        if (delta <= 1e-14 * X.norm()) break;
    }
    return 0.5 * (Mat::Identity(N, N) + X);
}

AsymptoticProjections asymptotic_projections(const DynamicsFamily& family)
{
    const Eigen::Index N = 2 * family.n();
    Mat I = Mat::Identity(N, N);
    Mat pp = positive_spectral_projection(family.B_plus);
    Mat mp = positive_spectral_projection(family.B_minus);
    return {pp, I - pp, mp, I - mp};
}

AsymptoticProjections transported_projections(const DynamicsFamily& family, double t)
{
    AsymptoticProjections a = asymptotic_projections(family);
    Mat Rp = dynamics(family, t, family.t_plus);
    Mat Rm = dynamics(family, t, family.t_minus);
    Mat Rpi = Rp.inverse(), Rmi = Rm.inverse();
    return {Rp * a.plus_pos * Rpi, Rp * a.plus_neg * Rpi, Rm * a.minus_pos * Rmi, Rm * a.minus_neg * Rmi};
}

namespace {

TwoStateProjections pair_projections(const Mat& pos1, const Mat& pos2)
{
    const Eigen::Index N = pos1.rows();
    Mat I = Mat::Identity(N, N);
    ProjectionQuad q = kato_projections(2.0 * pos1 - I, 2.0 * pos2 - I);
    return {q.L12p, q.L12m};
}

}  // namespace

TwoStateProjections inout_projections(const DynamicsFamily& family, double t)
{
    AsymptoticProjections p = transported_projections(family, t);
    return pair_projections(p.plus_pos, p.minus_pos);
}

TwoStateProjections outin_projections(const DynamicsFamily& family, double t)
{
    AsymptoticProjections p = transported_projections(family, t);
    return pair_projections(p.minus_pos, p.plus_pos);
}

Mat inout_feynman(const DynamicsFamily& family, double t, double s)
{
    TwoStateProjections p = inout_projections(family, t);
    Mat R = dynamics(family, t, s);
    return t >= s ? Mat(p.pos * R) : Mat(-p.neg * R);
}

Mat outin_antifeynman(const DynamicsFamily& family, double t, double s)
{
    TwoStateProjections p = outin_projections(family, t);
    Mat R = dynamics(family, t, s);
    return t >= s ? Mat(p.neg * R) : Mat(-p.pos * R);
}

TwoStateKernels two_state_kernels(const Mat& R, const TwoStateProjections& p, double t, double s,
                                  const Eigen::VectorXd& lapse)
{
    const Eigen::Index n = R.rows() / 2;
    Eigen::VectorXd a = lapse.size() ? lapse : Eigen::VectorXd::Ones(n);
    auto g12 = [&](const Mat& X) -> Mat { return a.asDiagonal() * X.topRightCorner(n, n) * a.asDiagonal(); };
    Mat PR = p.pos * R, NR = p.neg * R;
    TwoStateKernels k;
    k.pos = g12(PR);
    k.neg = -g12(NR);
    const bool fwd = t >= s;
    k.F = I * (fwd ? g12(PR) : Mat(-g12(NR)));
    k.Fbar = I * (fwd ? g12(NR) : Mat(-g12(PR)));
    k.PJ = I * g12(R);
    k.ret = t > s ? k.PJ : Mat::Zero(n, n);
    k.adv = s > t ? Mat(-k.PJ) : Mat::Zero(n, n);
    return k;
}

double IdentityResiduals::max() const
{
    return std::max({relB, relC, relD, relE});
}

IdentityResiduals identity_residuals(const TwoStateKernels& k)
{
    IdentityResiduals r;
    r.relB = (k.F - k.Fbar - I * (k.pos + k.neg)).cwiseAbs().maxCoeff();
    r.relC = std::max((k.PJ - (k.ret - k.adv)).cwiseAbs().maxCoeff(),
                      (k.PJ - I * (k.pos - k.neg)).cwiseAbs().maxCoeff());
    r.relD = std::max((k.F - (I * k.pos + k.adv)).cwiseAbs().maxCoeff(),
                      (k.F - (I * k.neg + k.ret)).cwiseAbs().maxCoeff());
    r.relE = std::max((k.Fbar - (-I * k.pos + k.ret)).cwiseAbs().maxCoeff(),
                      (k.Fbar - (-I * k.neg + k.adv)).cwiseAbs().maxCoeff());
    r.specialty = (k.F + k.Fbar - k.ret - k.adv).cwiseAbs().maxCoeff();
    return r;
}

IdentityResiduals static_identity_residuals(const StaticModel& model, double t, double s)
{
    TwoStateKernels k;
    k.pos = static_kernels(model, PropagatorKind::Pos, t, s);
    k.neg = static_kernels(model, PropagatorKind::Neg, t, s);
    k.F = static_kernels(model, PropagatorKind::F, t, s);
    k.Fbar = static_kernels(model, PropagatorKind::Fbar, t, s);
    k.ret = static_kernels(model, PropagatorKind::Ret, t, s);
    k.adv = static_kernels(model, PropagatorKind::Adv, t, s);
    k.PJ = static_kernels(model, PropagatorKind::PJ, t, s);
    return identity_residuals(k);
}

namespace {

Mat mode_basis(const Mat& B)
{
    const Eigen::Index n = B.rows() / 2;
    Mat W = B.topLeftCorner(n, n);
    Mat one = B.topRightCorner(n, n);
    if (W.norm() > 1e-12 || (one - Mat::Identity(n, n)).norm() > 1e-12)
        throw Error(ErrorCode::PreconditionFailed, "Bogoliubov blocks need asymptotic generators with W = 0");
    Mat L = B.bottomLeftCorner(n, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(L);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw Error(ErrorCode::StabilityRequired, "asymptotic L must be positive definite");
    Eigen::VectorXcd q = es.eigenvalues().array().pow(0.25).cast<cplx>();
    Mat Lq = es.eigenvectors() * q.asDiagonal() * es.eigenvectors().adjoint();
    Mat Lmq = es.eigenvectors() * q.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    const double r = 1.0 / std::sqrt(2.0);
    Mat V(2 * n, 2 * n);
    V << r * Lmq, r * Lmq, r * Lq, -r * Lq;
    return V;
}

}  // namespace

BogoliubovBlocks bogoliubov_blocks(const DynamicsFamily& family)
{
    const Eigen::Index n = family.n();
    Mat Vp = mode_basis(family.B_plus), Vm = mode_basis(family.B_minus);
    Mat R = dynamics(family, family.t_plus, family.t_minus);
    BogoliubovBlocks b;
    b.T = Vp.inverse() * R * Vm;
    b.N = b.T.topLeftCorner(n, n);
    b.M = b.T.bottomLeftCorner(n, n);
    Mat J = Mat::Identity(2 * n, 2 * n);
    J.bottomRightCorner(n, n) *= -1.0;
    b.pseudounitarity = (b.T.adjoint() * J * b.T - J).norm();
    return b;
}

}  // namespace kgp
