#include "kgprop/krein.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace kgp {

namespace {

constexpr double singular_ratio = 1e-12;

double rcond(const Mat& A)
{
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

void require_square(const Mat& A, Eigen::Index n, const char* what)
{
    if (A.rows() != n || A.cols() != n) throw Error(ErrorCode::InvalidArgument, what);
}

void require_involution(const Mat& S)
{
    Mat I = Mat::Identity(S.rows(), S.cols());
    if ((S * S - I).norm() > 1e-8 * std::max(1.0, S.norm() * S.norm()))
        throw Error(ErrorCode::NotInvolution, "matrix does not square to the identity");
}

}  // namespace

double op_norm(const Mat& A)
{
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues()(0);
}

KreinSpaceFD::KreinSpaceFD(Mat Q) : Q_(std::move(Q))
{
    if (Q_.rows() != Q_.cols() || Q_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "Q must be square");
    if ((Q_ - Q_.adjoint()).norm() > 1e-12 * std::max(1.0, Q_.norm()))
        throw Error(ErrorCode::InvalidArgument, "Q must be Hermitian");
    if (rcond(Q_) < singular_ratio) throw Error(ErrorCode::InvalidArgument, "Q must be nondegenerate");
    Qinv_ = Q_.inverse();
}

AdmissibleReport admissible_check(const KreinSpaceFD& space, const Mat& S)
{
    require_square(S, space.n(), "involution has the wrong size");
    require_involution(S);
    const Mat& Q = space.Q();
    AdmissibleReport r;
    r.form_residual = (S.adjoint() * Q * S - Q).norm() / Q.norm();
    Mat QS = Q * S;
    Mat herm = 0.5 * (QS + QS.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    r.witness = es.eigenvalues()(0);
    double antiherm = (QS - QS.adjoint()).norm() / std::max(1.0, QS.norm());
    r.admissible = r.form_residual < 1e-8 && antiherm < 1e-8 && r.witness > 0.0;
    return r;
}

Mat upsilon(const Mat& S1, const Mat& S2)
{
    if (S1.rows() != S2.rows() || S1.cols() != S2.cols())
        throw Error(ErrorCode::InvalidArgument, "involutions act on different spaces");
    Mat s = S1 + S2;
    return 0.25 * s * s;
}

ProjectionQuad kato_projections(const Mat& S1, const Mat& S2)
{
    require_involution(S1);
    require_involution(S2);
    const Eigen::Index n = S1.rows();
    Mat I = Mat::Identity(n, n);
    Mat U = upsilon(S1, S2);
    if (rcond(U) < 1e-10) throw Error(ErrorCode::NotComplementary, "Upsilon is singular");
    Mat Ui = U.inverse();
    Mat P1p = 0.5 * (I + S1), P1m = 0.5 * (I - S1);
    Mat P2p = 0.5 * (I + S2), P2m = 0.5 * (I - S2);
    return {P1p * Ui * P2p, P2m * Ui * P1m, P2p * Ui * P1p, P1m * Ui * P2m};
}

AngularPair angular_operators(const KreinSpaceFD& space, const Mat& S1, const Mat& S2)
{
    const Eigen::Index n = space.n();
    require_square(S1, n, "S1 has the wrong size");
    require_square(S2, n, "S2 has the wrong size");
    Mat I = Mat::Identity(n, n);
    Mat K = S2 * S1;
    Mat onepk = I + K;
    if (rcond(onepk) < singular_ratio) throw Error(ErrorCode::OnePlusKSingular, "1 + K is singular");

    Mat G = space.Q() * S1;
    G = (0.5 * (G + G.adjoint())).eval();
    Eigen::LLT<Mat> llt(G);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::PreconditionFailed, "S1 is not admissible: QS1 not positive definite");
    Mat Y = llt.matrixU();  // G = Y^+ Y
    Mat Yi = Y.inverse();
    Mat S1y = Y * S1 * Yi;
    S1y = (0.5 * (S1y + S1y.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(S1y);
    // eigenvalues ascending: -1 block first; reorder so +1 comes first
    Eigen::Index nminus = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) < 0.0) ++nminus;
    const Eigen::Index np = n - nminus;
    Mat V(n, n);
    V.leftCols(np) = es.eigenvectors().rightCols(np);
    V.rightCols(nminus) = es.eigenvectors().leftCols(nminus);

    AngularPair a;
    a.basis = Yi * V;
    a.n_plus = np;
    Mat M = (I - K) * onepk.inverse();
    Mat Mb = to_s1_basis(a, M);
    a.c = Mb.topRightCorner(np, nminus);
    a.d = Mb.bottomLeftCorner(nminus, np);
    return a;
}

Mat to_s1_basis(const AngularPair& ang, const Mat& A)
{
    return ang.basis.inverse() * A * ang.basis;
}

BlockForms block_forms(const AngularPair& ang)
{
    const Eigen::Index p = ang.c.rows(), q = ang.c.cols(), n = p + q;
    const Mat& c = ang.c;
    const Mat& d = ang.d;
    Mat Ip = Mat::Identity(p, p), Iq = Mat::Identity(q, q);
    Mat cd = c * d, dc = d * c;
    Mat icd = (Ip - cd).inverse(), idc = (Iq - dc).inverse();

    BlockForms f;
    f.upsilon = Mat::Zero(n, n);
    f.upsilon.topLeftCorner(p, p) = icd;
    f.upsilon.bottomRightCorner(q, q) = idc;

    f.K.resize(n, n);
    f.K << (Ip + cd) * icd, -2.0 * c * idc, -2.0 * d * icd, (Iq + dc) * idc;

    f.Pi2p.resize(n, n);
    f.Pi2p << icd, c * idc, -d * icd, -dc * idc;
    f.Pi2m.resize(n, n);
    f.Pi2m << -cd * icd, -c * idc, d * icd, idc;

    f.S2.resize(n, n);
    f.S2 << (Ip + cd) * icd, 2.0 * c * idc, -2.0 * d * icd, -(Iq + dc) * idc;

    f.L12p = Mat::Zero(n, n);
    f.L12p.topLeftCorner(p, p) = Ip;
    f.L12p.topRightCorner(p, q) = c;
    f.L12m = Mat::Zero(n, n);
    f.L12m.topRightCorner(p, q) = -c;
    f.L12m.bottomRightCorner(q, q) = Iq;
    f.L21p = Mat::Zero(n, n);
    f.L21p.topLeftCorner(p, p) = Ip;
    f.L21p.bottomLeftCorner(q, p) = -d;
    f.L21m = Mat::Zero(n, n);
    f.L21m.bottomLeftCorner(q, p) = d;
    f.L21m.bottomRightCorner(q, q) = Iq;
    return f;
}

Mat q_adjoint(const KreinSpaceFD& space, const Mat& S_ref, const Mat& A)
{
    require_square(A, space.n(), "operator has the wrong size");
    Mat G = space.Q() * S_ref;
    Mat star = G.inverse() * A.adjoint() * G;  // adjoint for (.|QS.)
    return S_ref * star * S_ref;
}

LemmaReport lemma_bound_check(const Mat& P, const Mat& S, double alpha)
{
    const Eigen::Index n = P.rows();
    require_square(P, n, "P must be square");
    require_square(S, n, "S must match P");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::PreconditionFailed, "alpha must lie in (0, 1]");
    Mat I = Mat::Identity(n, n);
    const double tol = 1e-10;
    if ((P * P - P).norm() > tol || (P - P.adjoint()).norm() > tol)
        throw Error(ErrorCode::PreconditionFailed, "P is not an orthogonal projection");
    if ((S - S.adjoint()).norm() > tol || (S * S - I).norm() > 1e-8)
        throw Error(ErrorCode::PreconditionFailed, "S is not a self-adjoint involution");
    Mat Pc = I - P;
    Eigen::SelfAdjointEigenSolver<Mat> e1(P * S * P - alpha * P);
    if (e1.eigenvalues()(0) < -tol) throw Error(ErrorCode::PreconditionFailed, "PSP >= alpha P fails");
    Eigen::SelfAdjointEigenSolver<Mat> e2(Pc * S * Pc);
    if (e2.eigenvalues()(n - 1) > tol) throw Error(ErrorCode::PreconditionFailed, "(1-P)S(1-P) <= 0 fails");

    Mat T = S * Pc + P * S;
    Eigen::JacobiSVD<Mat> svd(T);
    const double smin = svd.singularValues()(n - 1);
    LemmaReport r;
    r.bound = 1.0 / (1.0 - std::sqrt(std::max(0.0, 1.0 - alpha * alpha)));
    r.inv_norm = smin > 0.0 ? 1.0 / smin : INFINITY;
    r.bound_ok = r.inv_norm <= r.bound * (1.0 + 1e-12);
    return r;
}

BogoliubovReport bogoliubov_mode_coeffs(const Vec& N, const Mat& Lam)
{
    const Eigen::Index n = N.size();
    require_square(Lam, n, "Lambda must be square over the mode set");
    BogoliubovReport r;
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index kp = 0; kp < n; ++kp)
            r.intertwining = std::max(r.intertwining, std::abs(N(kp) * Lam(k, kp) - Lam(kp, k) * N(k)));
    Mat G = Lam.adjoint() * Lam;
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index kp = 0; kp < n; ++kp) {
            cplx target = k == kp ? cplx(std::norm(N(k)) - 1.0) : cplx(0.0);
            r.normalization = std::max(r.normalization, std::abs(G(k, kp) - target));
        }
    return r;
}

namespace {

Mat gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    Mat A(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) A(i, j) = cplx(nd(rng), nd(rng));
    return A;
}

}  // namespace

AdmissiblePair random_admissible_pair(int n, std::mt19937_64& rng, double gen_norm)
{
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    std::uniform_int_distribution<int> pd(n > 1 ? 1 : 0, n > 1 ? n - 1 : 1);
    const int p = n > 1 ? pd(rng) : 1;
    Mat Q0 = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) Q0(i, i) = i < p ? 1.0 : -1.0;

    std::uniform_real_distribution<double> ud(0.0, gen_norm);
    auto boost = [&]() {
        Mat H = gaussian(n, n, rng);
        H = (0.5 * (H + H.adjoint())).eval();
        Mat X = cplx(0.0, 1.0) * Q0 * H;
        X *= ud(rng) / op_norm(X);
        return Mat(X.exp());
    };
    Mat U1 = boost(), U2 = boost();
    Mat S1 = U1 * Q0 * U1.inverse();
    Mat S2 = U2 * Q0 * U2.inverse();

    Mat M = Mat::Identity(n, n) + 0.3 / std::sqrt(double(n)) * gaussian(n, n, rng);
    Mat Mi = M.inverse();
    Mat Q = M.adjoint() * Q0 * M;
    Q = (0.5 * (Q + Q.adjoint())).eval();
    return {KreinSpaceFD(Q), Mi * S1 * M, Mi * S2 * M};
}

double uniform_positivity(const KreinSpaceFD& space, const Mat& P, bool negative)
{
    Eigen::ColPivHouseholderQR<Mat> qr(P);
    qr.setThreshold(1e-10);
    const Eigen::Index r = qr.rank();
    if (r == 0) return 0.0;
    Mat Qfull = qr.householderQ();
    Mat B = Qfull.leftCols(r);
    Mat form = B.adjoint() * space.Q() * B;
    form = (0.5 * (form + form.adjoint())).eval();
    if (negative) form = -form;
    Eigen::SelfAdjointEigenSolver<Mat> es(form);
    return es.eigenvalues()(0);
}

}  // namespace kgp
