#include <cmath>
#include <vector>

#include "kgprop/specfun.hpp"

namespace kgp {

namespace {

const double sqrt_pi = std::sqrt(pi);

double dist_to_int(cplx x)
{
    return std::hypot(x.real() - std::round(x.real()), x.imag());
}

// S depends on lambda only through lambda^2; pick one representative so both signs share a code path.
cplx canonical_lambda(cplx lam)
{
    if (lam.real() < 0.0 || (lam.real() == 0.0 && lam.imag() < 0.0)) return -lam;
    return lam;
}


cplx z_far(cplx al, cplx lam, const CutComplex& w)
{
    const cplx wv = w.value;
    CutComplex iw2 = map_cut(w, 1.0 / (wv * wv), -2.0 / (wv.real() * wv.real() * wv.real()));
    return pow_cut(w, -0.5 - al - lam) *
           hyp2f1_olver(0.25 + 0.5 * al + 0.5 * lam, 0.75 + 0.5 * al + 0.5 * lam, 1.0 + lam, iw2);
}

cplx z_near_origin(cplx al, cplx lam, const CutComplex& w)
{
    const cplx wv = w.value;
    const double x = wv.real();
    CutComplex arg = map_cut(w, 2.0 / (1.0 + wv), -2.0 / ((1.0 + x) * (1.0 + x)));
    cplx pref = std::pow(1.0 + wv, -0.5 - al - lam) * std::pow(2.0, 2.0 * lam) * cgamma(0.5 + lam) / sqrt_pi;
    return pref * hyp2f1_olver(0.5 + lam, 0.5 + lam + al, 1.0 + 2.0 * lam, arg);
}

}  // namespace

cplx gegenbauer_s(const GegenbauerParams& p, const CutComplex& w)
{
    if (w.on_real_axis() && w.re() <= -1.0 && w.side == Side::Off)
        throw Error(ErrorCode::DomainError, "S needs a side on (-inf, -1]");
    const cplx al = p.alpha, lam = canonical_lambda(p.lambda);
    CutComplex z = map_cut(w, 0.5 * (1.0 - w.value), -0.5);
    return hyp2f1_olver(0.5 + al + lam, 0.5 + al - lam, al + 1.0, z);
}

void gegenbauer_s_batch(const GegenbauerParams& p, std::span<const CutComplex> w, std::span<cplx> out)
{
    const cplx al = p.alpha, lam = canonical_lambda(p.lambda);
    std::vector<CutComplex> z(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].on_real_axis() && w[i].re() <= -1.0 && w[i].side == Side::Off)
            throw Error(ErrorCode::DomainError, "S needs a side on (-inf, -1]");
        z[i] = map_cut(w[i], 0.5 * (1.0 - w[i].value), -0.5);
    }
    hyp2f1_olver_batch(0.5 + al + lam, 0.5 + al - lam, al + 1.0, z, out);
}

cplx gegenbauer_z(const GegenbauerParams& p, const CutComplex& w, EvalInfo* info)
{
    if (w.on_real_axis() && w.re() <= 1.0 && w.side == Side::Off)
        throw Error(ErrorCode::DomainError, "Z needs a side on (-inf, 1]");
    const cplx al = p.alpha, lam = p.lambda;
    if (info) info->degenerate = false;
    if (std::abs(w.value) >= 1e-3) return z_far(al, lam, w);

    // 1 + 2 lambda close to a non-positive integer: the near-origin form is 0 * inf.
    cplx c2 = 1.0 + 2.0 * lam;
    bool degenerate = c2.real() < 0.5 && dist_to_int(c2) < 1e-3;
    if (!degenerate) return z_near_origin(al, lam, w);

    if (info) info->degenerate = true;
    const double h = 2e-3;
    cplx f1 = 0.5 * (z_near_origin(al, lam + h, w) + z_near_origin(al, lam - h, w));
    cplx f2 = 0.5 * (z_near_origin(al, lam + 2.0 * h, w) + z_near_origin(al, lam - 2.0 * h, w));
    return (4.0 * f1 - f2) / 3.0;
}

cplx pow_bullet(const CutComplex& w, cplx mu)
{
    return pow_cut(map_cut(w, w.value - 1.0, 1.0), mu) * pow_cut(map_cut(w, w.value + 1.0, 1.0), mu);
}

namespace {

struct Sides {
    cplx lhs;
    cplx rhs;
    double scale;
};

Sides formula_s_minus(cplx al, cplx lam, const CutComplex& w)
{
    const double x = w.re();
    CutComplex mw = map_cut(w, -w.value, -1.0);
    CutComplex omw2 = map_cut(w, 1.0 - w.value * w.value, -2.0 * x);
    cplx lhs = gegenbauer_s({al, lam}, mw);
    cplx t1 = -cospi(lam) / sinpi(al) * gegenbauer_s({al, lam}, w);
    cplx t2 = std::pow(2.0, 2.0 * al) * pi * gegenbauer_s({-al, -lam}, w) * rgamma(0.5 + al + lam) *
              rgamma(0.5 + al - lam) / (sinpi(al) * pow_cut(omw2, al));
    return {lhs, t1 + t2, std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)})};
}

Sides formula_z_from_s(cplx al, cplx lam, const CutComplex& w)
{
    cplx lhs = gegenbauer_z({al, lam}, w);
    cplx t1 = -std::pow(2.0, lam - al - 0.5) * sqrt_pi * gegenbauer_s({al, lam}, w) * rgamma(0.5 - al + lam) /
              sinpi(al);
    cplx t2 = std::pow(2.0, lam + al - 0.5) * sqrt_pi * rgamma(0.5 + al + lam) / sinpi(al) *
              gegenbauer_s({-al, -lam}, w) / pow_bullet(w, al);
    return {lhs, t1 + t2, std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)})};
}

Sides formula_s_from_z(cplx al, cplx lam, const CutComplex& w)
{
    cplx lhs = gegenbauer_s({al, lam}, w);
    cplx pref = std::pow(2.0, -lam + al - 0.5) * sqrt_pi / sinpi(lam);
    cplx t1 = -pref * gegenbauer_z({al, lam}, w) * rgamma(0.5 + al - lam);
    cplx t2 = pref * std::pow(2.0, 2.0 * lam) * gegenbauer_z({al, -lam}, w) * rgamma(0.5 + al + lam);
    return {lhs, t1 + t2, std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)})};
}

// Right-hand side at a removable singularity: interpolate from symmetric nodes around the parameter.
template <class Fn>
Sides limit_rhs(Fn&& fn, cplx param)
{
    const double h = 0.01;
    const int offs[6] = {-3, -2, -1, 1, 2, 3};
    cplx nodes[6], vals[6];
    double scale = 1.0;
    for (int i = 0; i < 6; ++i) {
        nodes[i] = param + h * offs[i];
        Sides s = fn(nodes[i]);
        vals[i] = s.rhs;
        scale = std::max(scale, std::abs(s.rhs));
    }
    cplx rhs = 0.0;
    for (int i = 0; i < 6; ++i) {
        cplx wgt = 1.0;
        for (int j = 0; j < 6; ++j)
            if (j != i) wgt *= (param - nodes[j]) / (nodes[i] - nodes[j]);
        rhs += wgt * vals[i];
    }
    return {0.0, rhs, scale};
}

}  // namespace

std::array<double, 3> check_connection_formulas(const GegenbauerParams& p, const CutComplex& w)
{
    const cplx al = p.alpha, lam = p.lambda;
    const double near = 0.005;
    std::array<double, 3> res{};

    auto finish = [](cplx lhs, const Sides& r, double scale) {
        return std::abs(lhs - r.rhs) / std::max(scale, r.scale);
    };

    {
        Sides s = formula_s_minus(al, lam, w);
        if (dist_to_int(al) < near) {
            Sides r = limit_rhs([&](cplx a) { return formula_s_minus(a, lam, w); }, al);
            res[0] = finish(s.lhs, r, std::max(1.0, std::abs(s.lhs)));
        } else {
            res[0] = std::abs(s.lhs - s.rhs) / s.scale;
        }
    }
    {
        Sides s = formula_z_from_s(al, lam, w);
        if (dist_to_int(al) < near) {
            Sides r = limit_rhs([&](cplx a) { return formula_z_from_s(a, lam, w); }, al);
            res[1] = finish(s.lhs, r, std::max(1.0, std::abs(s.lhs)));
        } else {
            res[1] = std::abs(s.lhs - s.rhs) / s.scale;
        }
    }
    {
        Sides s = formula_s_from_z(al, lam, w);
        if (dist_to_int(lam) < near) {
            Sides r = limit_rhs([&](cplx l) { return formula_s_from_z(al, l, w); }, lam);
            res[2] = finish(s.lhs, r, std::max(1.0, std::abs(s.lhs)));
        } else {
            res[2] = std::abs(s.lhs - s.rhs) / s.scale;
        }
    }
    return res;
}

}  // namespace kgp
