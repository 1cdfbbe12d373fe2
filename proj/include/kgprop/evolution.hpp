#pragma once

#include <functional>

#include "kgprop/krein.hpp"

namespace kgp {

struct StaticModel {
    Mat L;                 // n x n Hermitian
    Eigen::VectorXd lapse;  // per-mode positive weights; empty means 1
};

// Kernels of d_t^2 + L as n x n matrices in (t, s). F/Fbar/Pos/Neg/Sym need L > 0;
// OpF/OpFbar are resolvent boundary values and accept any invertible Hermitian L.
Mat static_kernels(const StaticModel& model, PropagatorKind kind, double t, double s);

// PJ, Ret or Adv for possibly indefinite L (entire function of L).
Mat tachyonic_classical(const StaticModel& model, PropagatorKind kind, double t, double s);

struct DynamicsFamily {
    std::function<Mat(double)> B;  // 2n x 2n, [[W, 1], [L, W^+]]
    double t_minus = -1.0;
    double t_plus = 1.0;
    Mat B_minus, B_plus;
    Eigen::VectorXd lapse;

    Eigen::Index n() const { return B_minus.rows() / 2; }
};

// Block matrix [[W, 1], [L, W^+]].
Mat first_order_generator(const Mat& W, const Mat& L);
Mat kg_form(Eigen::Index n);  // Q = [[0, 1], [1, 0]]

// R(t, s) with (d_t + i B(t)) R = 0, R(s, s) = 1.
Mat dynamics(const DynamicsFamily& family, double t, double s);

struct AsymptoticProjections {
    Mat plus_pos, plus_neg, minus_pos, minus_neg;
};

Mat positive_spectral_projection(const Mat& B);
AsymptoticProjections asymptotic_projections(const DynamicsFamily& family);

// Pi_{+/-}^{(+/-)} transported to time t.
AsymptoticProjections transported_projections(const DynamicsFamily& family, double t);

// Two-state data at time t: Pi^{(+)} onto the first state's positive space along the second's negative space.
struct TwoStateProjections {
    Mat pos, neg;
};

TwoStateProjections inout_projections(const DynamicsFamily& family, double t);  // (+-) pair
TwoStateProjections outin_projections(const DynamicsFamily& family, double t);  // (-+) pair

Mat inout_feynman(const DynamicsFamily& family, double t, double s);       // E^F_{+-}
Mat outin_antifeynman(const DynamicsFamily& family, double t, double s);   // E^Fbar_{-+}

// n x n Green functions from Cauchy-data kernels, G = a X_12 a with the lapse a.
struct TwoStateKernels {
    Mat pos, neg, F, Fbar, ret, adv, PJ;
};

TwoStateKernels two_state_kernels(const Mat& R, const TwoStateProjections& p, double t, double s,
                                  const Eigen::VectorXd& lapse);

struct IdentityResiduals {
    double relB = 0.0, relC = 0.0, relD = 0.0, relE = 0.0, specialty = 0.0;
    double max() const;
};

IdentityResiduals identity_residuals(const TwoStateKernels& k);
IdentityResiduals static_identity_residuals(const StaticModel& model, double t, double s);

// In-out Bogoliubov blocks for asymptotic generators with W = 0: T = V_+^{-1} R(t+, t-) V_-.
struct BogoliubovBlocks {
    Mat T;        // 2n x 2n
    Mat N, M;     // T_{++}, T_{-+}
    double pseudounitarity = 0.0;  // || T^+ J T - J ||
};

BogoliubovBlocks bogoliubov_blocks(const DynamicsFamily& family);

}  // namespace kgp
