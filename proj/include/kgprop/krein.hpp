#pragma once

#include <random>

#include <Eigen/Dense>

#include "kgprop/core.hpp"

namespace kgp {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Finite-dimensional space with the indefinite form (v|Qw).
class KreinSpaceFD {
public:
    explicit KreinSpaceFD(Mat Q);
    const Mat& Q() const { return Q_; }
    const Mat& Qinv() const { return Qinv_; }
    Eigen::Index n() const { return Q_.rows(); }

private:
    Mat Q_, Qinv_;
};

struct AdmissibleReport {
    bool admissible = false;
    double witness = 0.0;        // smallest eigenvalue of the Hermitian part of QS
    double form_residual = 0.0;  // ||S^+ Q S - Q||
};

AdmissibleReport admissible_check(const KreinSpaceFD& space, const Mat& S);

Mat upsilon(const Mat& S1, const Mat& S2);

struct ProjectionQuad {
    Mat L12p, L12m, L21p, L21m;
};

ProjectionQuad kato_projections(const Mat& S1, const Mat& S2);

// c: Z1- -> Z1+, d: Z1+ -> Z1- as blocks in a basis orthonormal for (.|QS1.) that diagonalises S1.
struct AngularPair {
    Mat c, d;
    Mat basis;  // columns: Z1+ vectors first, then Z1-
    Eigen::Index n_plus = 0;
};

AngularPair angular_operators(const KreinSpaceFD& space, const Mat& S1, const Mat& S2);

// Block formulas in the S1 basis built from (c, d) alone.
struct BlockForms {
    Mat upsilon, K, Pi2p, Pi2m, S2, L12p, L12m, L21p, L21m;
};

BlockForms block_forms(const AngularPair& ang);

// Express an operator in the S1 basis of ang.
Mat to_s1_basis(const AngularPair& ang, const Mat& A);

Mat q_adjoint(const KreinSpaceFD& space, const Mat& S_ref, const Mat& A);

struct LemmaReport {
    bool bound_ok = false;
    double inv_norm = 0.0;
    double bound = 0.0;
};

LemmaReport lemma_bound_check(const Mat& P, const Mat& S, double alpha);

struct BogoliubovReport {
    double intertwining = 0.0;   // max |N(k') L(k,k') - L(k',k) N(k)|
    double normalization = 0.0;  // max |sum conj(L) L - (|N|^2 - 1) delta|
};

BogoliubovReport bogoliubov_mode_coeffs(const Vec& N, const Mat& Lam);

struct AdmissiblePair {
    KreinSpaceFD space;
    Mat S1, S2;
};

// Q = M^+ diag(1..1, -1..-1) M for a random well-conditioned M; S_i conjugates of the canonical
// involution by exponentials of random Q-antisymmetric generators of norm <= gen_norm.
AdmissiblePair random_admissible_pair(int n, std::mt19937_64& rng, double gen_norm = 1.5);

// Smallest eigenvalue of (v|Qv) restricted to an orthonormal basis of ran(P) (sign flipped when negative = true).
double uniform_positivity(const KreinSpaceFD& space, const Mat& P, bool negative = false);

double op_norm(const Mat& A);

}  // namespace kgp
