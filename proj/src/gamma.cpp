#include <cmath>

#include "kgprop/specfun.hpp"

namespace kgp {

namespace {

constexpr double lanczos_g = 7.0;
constexpr double lanczos_coef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};
const double half_log_2pi = 0.5 * std::log(2.0 * pi);

double sinpi_real(double x)
{
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(pi * r);
}

double cospi_real(double x)
{
    double r = std::fabs(x - 2.0 * std::round(0.5 * x));  // [0, 1]
    return sinpi_real(0.5 - r);
}

// log Gamma for Re z >= 0.5
cplx lanczos_log(cplx z)
{
    z -= 1.0;
    cplx x = lanczos_coef[0];
    for (int i = 1; i < 9; ++i) x += lanczos_coef[i] / (z + double(i));
    cplx t = z + lanczos_g + 0.5;
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx sinpi(cplx z)
{
    double x = z.real(), y = z.imag();
    if (y == 0.0) return sinpi_real(x);
    return {sinpi_real(x) * std::cosh(pi * y), cospi_real(x) * std::sinh(pi * y)};
}

cplx cospi(cplx z)
{
    double x = z.real(), y = z.imag();
    if (y == 0.0) return cospi_real(x);
    return {cospi_real(x) * std::cosh(pi * y), -sinpi_real(x) * std::sinh(pi * y)};
}

cplx lgamma_c(cplx z)
{
    if (z.real() < 0.5) return std::log(pi) - std::log(sinpi(z)) - lanczos_log(1.0 - z);
    return lanczos_log(z);
}

cplx cgamma(cplx z)
{
    if (z.real() < 0.5) return pi / (sinpi(z) * cgamma(1.0 - z));
    if (std::abs(z) < 20.0) {
        cplx zz = z - 1.0;
        cplx x = lanczos_coef[0];
        for (int i = 1; i < 9; ++i) x += lanczos_coef[i] / (zz + double(i));
        cplx t = zz + lanczos_g + 0.5;
        return std::sqrt(2.0 * pi) * std::pow(t, zz + 0.5) * std::exp(-t) * x;
    }
    return std::exp(lanczos_log(z));
}

cplx rgamma(cplx z)
{
    if (z.real() < 0.5) return sinpi(z) * cgamma(1.0 - z) / pi;
    return 1.0 / cgamma(z);
}

cplx log_cut(const CutComplex& b)
{
    cplx v = b.value;
    if (v.imag() == 0.0 && v.real() < 0.0 && b.side != Side::Off) {
        double arg = b.side == Side::Above ? pi : -pi;
        return {std::log(-v.real()), arg};
    }
    return std::log(v);
}

cplx pow_cut(const CutComplex& b, cplx mu)
{
    if (b.value == 0.0) {
        if (mu == 0.0) return 1.0;
        if (mu.real() > 0.0) return 0.0;
        throw Error(ErrorCode::DomainError, "zero base with exponent of non-positive real part");
    }
    if (mu == 0.0) return 1.0;
    return std::exp(mu * log_cut(b));
}

CutComplex map_cut(const CutComplex& w, cplx fw, double dfdx)
{
    if (!w.on_real_axis() || w.side == Side::Off) return CutComplex(fw);
    if (fw.imag() != 0.0) return CutComplex(fw);
    Side s = w.side;
    if (dfdx < 0.0) s = flip(s);
    return CutComplex(fw, s);
}

}  // namespace kgp
