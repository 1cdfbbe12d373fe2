#pragma once

#include <string>
#include <vector>

#include "kgprop/specfun.hpp"

namespace kgp {

// Universal cover coordinates: time tau in R, u in [0, pi/2), omega on S^{d-2} (one entry +-1 for d = 2).
struct AdsPoint {
    double tau = 0.0;
    double u = 0.0;
    std::vector<double> omega;
};

struct AdsPairGeometry {
    double Z = 0.0;
    double dtau = 0.0;
    int region = 0;   // k of V_k
    int n = 0;        // chart W_n used for evaluation
    int s = 0;        // sgn(sin|dtau|) on odd regions, 0 on even ones
    int s_tilde = 0;  // sgn(sin dtau) on odd regions, 0 on even ones
    bool null_separated = false;
};

AdsPairGeometry ads_geometry(const AdsPoint& x, const AdsPoint& y);

// Geometry from (Z, tau - tau'); the region follows by continuity in tau at fixed spatial positions.
AdsPairGeometry ads_pair(double Z, double dtau);

// Same pair evaluated on another chart containing it (n or n +- 1 on odd regions).
AdsPairGeometry on_chart(const AdsPairGeometry& g, int n);

// sqrt(m^2 + ((d-1)/2)^2), principal branch
cplx ads_nu(int d, cplx m2);

cplx ads_prefactor(int d, cplx nu);

// Resolvent kernel of (-box - ((d-1)/2)^2 + nu^2)^{-1} on the chart of g, for Re nu > 0 and nu^2 not real.
cplx ads_resolvent(int d, cplx nu, const AdsPairGeometry& g);

// F / Fbar boundary values for nu >= 0.
cplx op_feynman_ads(int d, double nu, PropagatorKind which, const AdsPairGeometry& g);

// Same from nu^2; nu^2 < 0 continues each branch to nu = -+i sqrt(-nu^2).
cplx op_feynman_ads_nu2(int d, double nu2, PropagatorKind which, const AdsPairGeometry& g);

cplx ads_pos_neg(int d, double nu, PropagatorKind which, const AdsPairGeometry& g);

// Any of F, Fbar, Pos, Neg, Ret, Adv, PJ, Sym for nu >= 0.
cplx ads_kernel(int d, double nu, PropagatorKind kind, const AdsPairGeometry& g);

enum class PtRegime { EssentiallySelfAdjoint, FriedrichsDistinguished, UnboundedBelow };

const char* to_string(PtRegime r);

struct PtReport {
    double alpha = 0.0;
    double alpha2 = 0.0;
    double nu2 = 0.0;
    PtRegime regime = PtRegime::EssentiallySelfAdjoint;
    bool origin_artifact = false;  // alpha^2 < 1 at u = 0 needs no boundary condition
    std::string note;
};

PtReport pt_mode_analysis(int d, int l, double nu2);

}  // namespace kgp
