#include "doctest.h"

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "kgprop/krein.hpp"

using namespace kgp;

namespace {

Mat swapQ()
{
    Mat Q(2, 2);
    Q << 0, 1, 1, 0;
    return Q;
}

Mat I_(Eigen::Index n) { return Mat::Identity(n, n); }

}  // namespace

TEST_CASE("admissibility of simple involutions")
{
    KreinSpaceFD sp(swapQ());
    auto r = admissible_check(sp, swapQ());
    CHECK(r.admissible);
    CHECK(r.witness == doctest::Approx(1.0));

    Mat S(2, 2);
    S << 1, 0, 0, -1;
    CHECK_FALSE(admissible_check(sp, S).admissible);

    Mat bad(2, 2);
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(admissible_check(sp, bad), Error);
}

TEST_CASE("random pseudounitary conjugates are admissible")
{
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        auto pr = random_admissible_pair(2 + it % 7, rng);
        CHECK(admissible_check(pr.space, pr.S1).admissible);
        CHECK(admissible_check(pr.space, pr.S2).admissible);
    }
}

TEST_CASE("upsilon edge cases")
{
    std::mt19937_64 rng(3);
    auto pr = random_admissible_pair(4, rng);
    CHECK((upsilon(pr.S1, pr.S1) - I_(4)).norm() < 1e-10);
    CHECK(upsilon(pr.S1, -pr.S1).norm() < 1e-12);
    CHECK_THROWS_AS(kato_projections(pr.S1, -pr.S1), Error);
}

TEST_CASE("identical involutions give the spectral projections")
{
    std::mt19937_64 rng(5);
    auto pr = random_admissible_pair(5, rng);
    auto quad = kato_projections(pr.S1, pr.S1);
    Mat P1p = 0.5 * (I_(5) + pr.S1);
    CHECK((quad.L12p - P1p).norm() < 1e-10);
    auto ang = angular_operators(pr.space, pr.S1, pr.S1);
    CHECK(ang.c.norm() < 1e-10);
    CHECK(ang.d.norm() < 1e-10);
}

TEST_CASE("two-dimensional boost pair")
{
    Mat Q(2, 2);
    Q << 1, 0, 0, -1;
    KreinSpaceFD sp(Q);
    const double r = 0.7;
    Mat U(2, 2);
    U << std::cosh(r), std::sinh(r), std::sinh(r), std::cosh(r);
    Mat S2 = U * Q * U.inverse();
    CHECK((U.adjoint() * Q * U - Q).norm() < 1e-12);
    auto quad = kato_projections(Q, S2);
    CHECK((quad.L12p * quad.L12p - quad.L12p).norm() < 1e-12);
    CHECK((quad.L12p + quad.L12m - I_(2)).norm() < 1e-12);
    auto ang = angular_operators(sp, Q, S2);
    CHECK(op_norm(ang.c) < 1.0);
    CHECK(std::abs(ang.c(0, 0)) == doctest::Approx(std::tanh(r)).epsilon(1e-9));
}

TEST_CASE("property suite on random admissible pairs")
{
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + it % 7;
        auto pr = random_admissible_pair(n, rng);
        const Mat& S1 = pr.S1;
        const Mat& S2 = pr.S2;
        Mat I = I_(n);
        Mat P1p = 0.5 * (I + S1), P1m = 0.5 * (I - S1), P2p = 0.5 * (I + S2), P2m = 0.5 * (I - S2);

        auto q = kato_projections(S1, S2);
        for (const Mat* L : {&q.L12p, &q.L12m, &q.L21p, &q.L21m}) CHECK(((*L) * (*L) - *L).norm() < 1e-9);
        CHECK((q.L12p + q.L12m - I).norm() < 1e-9);
        CHECK((q.L21p + q.L21m - I).norm() < 1e-9);
        // ranges and kernels
        CHECK((P1m * q.L12p).norm() < 1e-9);
        CHECK((q.L12p * P2m).norm() < 1e-9);
        CHECK((P2p * q.L12m).norm() < 1e-9);
        CHECK((q.L12m * P1p).norm() < 1e-9);

        Mat U = upsilon(S1, S2);
        CHECK((U - (P1p + P2m) * (P2p + P1m)).norm() < 1e-9 * U.norm());
        for (const Mat* P : {&P1p, &P1m, &P2p, &P2m}) CHECK((U * (*P) - (*P) * U).norm() < 1e-9 * U.norm());

        auto ang = angular_operators(pr.space, S1, S2);
        CHECK(op_norm(ang.c) < 1.0);
        CHECK((ang.d - ang.c.adjoint()).norm() < 1e-9);
        auto f = block_forms(ang);
        CHECK((to_s1_basis(ang, U) - f.upsilon).norm() < 1e-9 * f.upsilon.norm());
        CHECK((to_s1_basis(ang, S2 * S1) - f.K).norm() < 1e-9 * f.K.norm());
        CHECK((to_s1_basis(ang, P2p) - f.Pi2p).norm() < 1e-9 * f.Pi2p.norm());
        CHECK((to_s1_basis(ang, P2m) - f.Pi2m).norm() < 1e-9 * f.Pi2m.norm());
        CHECK((to_s1_basis(ang, S2) - f.S2).norm() < 1e-9 * f.S2.norm());
        CHECK((to_s1_basis(ang, q.L12p) - f.L12p).norm() < 1e-9 * f.L12p.norm());
        CHECK((to_s1_basis(ang, q.L21m) - f.L21m).norm() < 1e-9 * f.L21m.norm());

        // K positive for (.|QS1.)
        Mat GK = pr.space.Q() * S1 * S2 * S1;
        GK = (0.5 * (GK + GK.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(GK);
        CHECK(es.eigenvalues()(0) > 0.0);

        // Lambda_12^+ and Lambda_21^+ are Q-adjoints of each other
        CHECK((q_adjoint(pr.space, S1, q.L12p) - q.L21p).norm() < 1e-9 * q.L21p.norm());
        CHECK((q_adjoint(pr.space, S1, q_adjoint(pr.space, S1, S2)) - S2).norm() < 1e-9 * S2.norm());

        // maximal uniform positivity of the spectral subspaces
        CHECK(uniform_positivity(pr.space, P1p) > 0.0);
        CHECK(uniform_positivity(pr.space, P2m, true) > 0.0);
    }
}

TEST_CASE("q adjoint")
{
    std::mt19937_64 rng(9);
    auto pr = random_admissible_pair(6, rng);
    CHECK((q_adjoint(pr.space, pr.S1, I_(6)) - I_(6)).norm() < 1e-12);
    Mat A = Mat::Random(6, 6);
    Mat As = q_adjoint(pr.space, pr.S2, A);
    CHECK((As - pr.space.Qinv() * A.adjoint() * pr.space.Q()).norm() < 1e-10 * A.norm());
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Vec v = Vec::Unit(6, i), w = Vec::Unit(6, j);
            cplx lhs = (As * v).dot(pr.space.Q() * w);
            cplx rhs = v.dot(pr.space.Q() * A * w);
            CHECK(std::abs(lhs - rhs) < 1e-10 * A.norm());
        }
}

TEST_CASE("lemma bound")
{
    Mat S = Mat::Identity(4, 4);
    S(2, 2) = S(3, 3) = -1.0;
    Mat P = 0.5 * (Mat::Identity(4, 4) + S);
    auto r = lemma_bound_check(P, S, 1.0);
    CHECK(r.bound_ok);
    CHECK(r.inv_norm == doctest::Approx(1.0));

    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 20; ++it) {
        const int n = 6;
        Mat H = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) H(i, j) = cplx(nd(rng), nd(rng));
        H = (0.5 * (H + H.adjoint())).eval();
        Mat W = (cplx(0.0, 0.15) * H).exp();
        Mat D = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) D(i, i) = i < 3 ? 1.0 : -1.0;
        Mat Pd = Mat::Zero(n, n);
        for (int i = 0; i < 3; ++i) Pd(i, i) = 1.0;
        Mat Sr = W * D * W.adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> es(Pd * Sr * Pd + (Mat::Identity(n, n) - Pd) * 10.0);
        double alpha = es.eigenvalues()(0);
        REQUIRE(alpha > 0.0);
        auto rep = lemma_bound_check(Pd, Sr, alpha);
        CHECK(rep.bound_ok);
        auto rep2 = lemma_bound_check(Pd, Sr, 0.5 * alpha);
        CHECK(rep2.bound_ok);
        CHECK(rep2.bound >= rep.bound);
    }
    CHECK_THROWS_AS(lemma_bound_check(P, -S, 0.5), Error);
}

TEST_CASE("bogoliubov mode conditions")
{
    Vec N = Vec::Ones(3);
    Mat L = Mat::Zero(3, 3);
    auto r = bogoliubov_mode_coeffs(N, L);
    CHECK(r.intertwining == 0.0);
    CHECK(r.normalization == 0.0);

    Vec N2(3);
    Mat L2 = Mat::Zero(3, 3);
    for (int k = 0; k < 3; ++k) {
        double m = 0.3 * (k + 1);
        N2(k) = std::sqrt(1.0 + m * m);
        L2(k, k) = cplx(0.0, m);
    }
    auto r2 = bogoliubov_mode_coeffs(N2, L2);
    CHECK(r2.intertwining < 1e-14);
    CHECK(r2.normalization < 1e-14);
}
