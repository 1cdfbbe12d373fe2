#include <immintrin.h>

#include <cstdlib>
#include <cstring>

#include "kgprop/specfun.hpp"

namespace kgp::simd {

void horner_scalar(const cplx* coef, std::size_t ncoef, const cplx* z, cplx* out, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j) {
        if (ncoef == 0) {
            out[j] = 0.0;
            continue;
        }
        const double zr = z[j].real(), zi = z[j].imag();
        double pr = coef[ncoef - 1].real(), pi_ = coef[ncoef - 1].imag();
        for (std::size_t k = ncoef - 1; k-- > 0;) {
            double nr = pr * zr - pi_ * zi + coef[k].real();
            double ni = pr * zi + pi_ * zr + coef[k].imag();
            pr = nr;
            pi_ = ni;
        }
        out[j] = {pr, pi_};
    }
}

__attribute__((target("avx2,fma"))) void horner_avx2(const cplx* coef, std::size_t ncoef, const cplx* z,
                                                     cplx* out, std::size_t n)
{
    if (ncoef == 0) {
        for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
        return;
    }
    const double* zd = reinterpret_cast<const double*>(z);
    double* od = reinterpret_cast<double*>(out);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d lo = _mm256_loadu_pd(zd + 2 * j);
        __m256d hi = _mm256_loadu_pd(zd + 2 * j + 4);
        __m256d zr = _mm256_unpacklo_pd(lo, hi);
        __m256d zi = _mm256_unpackhi_pd(lo, hi);
        __m256d pr = _mm256_set1_pd(coef[ncoef - 1].real());
        __m256d pi_ = _mm256_set1_pd(coef[ncoef - 1].imag());
        for (std::size_t k = ncoef - 1; k-- > 0;) {
            __m256d cr = _mm256_set1_pd(coef[k].real());
            __m256d ci = _mm256_set1_pd(coef[k].imag());
            __m256d nr = _mm256_fnmadd_pd(pi_, zi, _mm256_fmadd_pd(pr, zr, cr));
            __m256d ni = _mm256_fmadd_pd(pi_, zr, _mm256_fmadd_pd(pr, zi, ci));
            pr = nr;
            pi_ = ni;
        }
        _mm256_storeu_pd(od + 2 * j, _mm256_unpacklo_pd(pr, pi_));
        _mm256_storeu_pd(od + 2 * j + 4, _mm256_unpackhi_pd(pr, pi_));
    }
    if (j < n) horner_scalar(coef, ncoef, z + j, out + j, n - j);
}

bool avx2_supported()
{
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

Isa selected_isa()
{
    static const Isa isa = [] {
        const char* env = std::getenv("KGPROP_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

void horner(const cplx* coef, std::size_t ncoef, const cplx* z, cplx* out, std::size_t n)
{
    if (selected_isa() == Isa::Avx2) horner_avx2(coef, ncoef, z, out, n);
    else horner_scalar(coef, ncoef, z, out, n);
}

}  // namespace kgp::simd
