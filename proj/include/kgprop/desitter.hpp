#pragma once

#include <span>
#include <vector>

#include "kgprop/specfun.hpp"

namespace kgp {

// Global coordinates: x = (sinh tau, cosh tau * omega), omega on S^{d-1}.
struct DsPoint {
    double tau = 0.0;
    std::vector<double> omega;
};

enum class DsRegion { Vplus, Vminus, Aplus, Aminus, S };

const char* to_string(DsRegion r);

struct DsPairGeometry {
    double Z = 0.0;
    double t = 0.0;   // x^0 - x'^0
    double tA = 0.0;  // -(x^0 + x'^0)
    DsRegion region = DsRegion::S;
    bool null_separated = false;  // | |Z| - 1 | < 1e-10
};

std::vector<double> embed(const DsPoint& x);
DsPoint antipode(const DsPoint& x);
DsPairGeometry ds_geometry(const DsPoint& x, const DsPoint& y);

// Geometry from invariants; the region follows from Z and the signs of t and tA.
DsPairGeometry ds_pair(double Z, double t, double tA);

// Gamma((d-1)/2 + i nu) Gamma((d-1)/2 - i nu) / (4 pi)^{d/2}
cplx ds_prefactor(int d, cplx nu);

// Euclidean-state kernels and the classical propagators. Pos, Neg, F, Fbar, Sym, SymA, PJ, PJA, Ret, Adv;
// OpF/OpFbar are forwarded to op_feynman_ds.
cplx euclidean_kernel(int d, cplx nu, PropagatorKind kind, const DsPairGeometry& g);

// Same on many pairs; S evaluations go through gegenbauer_s_batch.
void euclidean_kernel_batch(int d, cplx nu, PropagatorKind kind, std::span<const DsPairGeometry> g,
                            std::span<cplx> out);

// Resolvent kernel G(-nu^2) = (-box + ((d-1)/2)^2 + nu^2)^{-1}. Re nu > 0 with Im nu != 0, or
// nu = i mu (tachyonic, mu >= 0 off the discrete spectrum).
cplx ds_resolvent(int d, cplx nu, const DsPairGeometry& g);

// Boundary values of the resolvent for nu > 0: F from Im nu -> 0-, Fbar from Im nu -> 0+.
cplx op_feynman_ds(int d, double nu, PropagatorKind which, const DsPairGeometry& g);

// Two-state kernels between the alpha- and beta-vacua: Pos, Neg, F, Fbar (also Ret, Adv, PJ, Sym).
cplx alpha_twostate_kernel(int d, double nu, cplx alpha, cplx beta, PropagatorKind kind, const DsPairGeometry& g);

// Single alpha-vacuum Bogoliubov coefficients between the alpha- and beta-vacua.
struct AlphaBogoliubov {
    cplx N, M;
};
AlphaBogoliubov alpha_bogoliubov(cplx alpha, cplx beta);

struct InOutVacua {
    cplx alpha_minus, alpha_plus;
};
InOutVacua inout_vacua(int d, double nu);

struct ScarfModeMap {
    double alpha = 0.0;
    bool reflectionless = false;
};
ScarfModeMap scarf_mode_map(int d, int l);

}  // namespace kgp
