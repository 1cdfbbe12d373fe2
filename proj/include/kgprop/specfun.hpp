#pragma once

#include <array>
#include <span>

#include "kgprop/core.hpp"

namespace kgp {

// Gamma family, complex argument.
cplx sinpi(cplx z);
cplx cospi(cplx z);
cplx cgamma(cplx z);
cplx rgamma(cplx z);
// log Gamma up to a multiple of 2 pi i; only meant for exponentiation.
cplx lgamma_c(cplx z);

// Principal power with side tags: a negative real base with side Above uses arg +pi, Below -pi.
cplx pow_cut(const CutComplex& base, cplx mu);
cplx log_cut(const CutComplex& base);

// Image of a cut point under a real-analytic map with real derivative dfdx at real points.
CutComplex map_cut(const CutComplex& w, cplx fw, double dfdx);

// Olver-normalised Gauss hypergeometric function F(a,b;c;z)/Gamma(c).
cplx hyp2f1_olver(cplx a, cplx b, cplx c, const CutComplex& z);

// Same function on many points; |z| <= 0.75 points share one coefficient table and the
// vectorised Horner kernel, the rest fall back to hyp2f1_olver.
void hyp2f1_olver_batch(cplx a, cplx b, cplx c, std::span<const CutComplex> z, std::span<cplx> out);

struct GegenbauerParams {
    cplx alpha;
    cplx lambda;
};

struct EvalInfo {
    bool degenerate = false;  // internal limit procedure was used
};

cplx gegenbauer_s(const GegenbauerParams& p, const CutComplex& w);
cplx gegenbauer_z(const GegenbauerParams& p, const CutComplex& w, EvalInfo* info = nullptr);
void gegenbauer_s_batch(const GegenbauerParams& p, std::span<const CutComplex> w, std::span<cplx> out);

// (w^2-1)^mu_bullet = (w-1)^mu (w+1)^mu.
cplx pow_bullet(const CutComplex& w, cplx mu);

// Residuals of the three connection formulas, each scaled by max(1, size of the largest term).
std::array<double, 3> check_connection_formulas(const GegenbauerParams& p, const CutComplex& w);

namespace simd {

enum class Isa { Scalar, Avx2 };

// out[j] = sum_k coef[k] z[j]^k
void horner_scalar(const cplx* coef, std::size_t ncoef, const cplx* z, cplx* out, std::size_t n);
void horner_avx2(const cplx* coef, std::size_t ncoef, const cplx* z, cplx* out, std::size_t n);
bool avx2_supported();
Isa selected_isa();
void horner(const cplx* coef, std::size_t ncoef, const cplx* z, cplx* out, std::size_t n);

}  // namespace simd

}  // namespace kgp
