#include <cmath>
#include <vector>

#include "kgprop/specfun.hpp"

namespace kgp {

namespace {

constexpr double eps = 0x1p-56;
constexpr double direct_radius = 0.75;
constexpr double degenerate_gap = 0.02;
constexpr int max_terms = 20000;

double dist_to_int(cplx x)
{
    return std::hypot(x.real() - std::round(x.real()), x.imag());
}

// Plain Taylor series of the Olver-normalised function, valid for |z| < 1.
cplx series(cplx a, cplx b, cplx c, cplx z)
{
    cplx term = rgamma(c);
    if (z == 0.0) return term;
    cplx sum = term, p = 1.0;
    bool track = c.real() < 0.5;
    const int n0 = int(std::abs(a) + std::abs(b) + std::abs(c)) + 4;
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
        cplx f = (a + double(n)) * (b + double(n)) / double(n + 1) * z;
        if (f == 0.0) return sum;
        cplx cn = c + double(n);
        if (track) p *= f;
        if (std::abs(cn) < 0.5) {
            term = p * rgamma(cn + 1.0);
            track = false;
        } else {
            term *= f / cn;
        }
        if (track && cn.real() > 0.5) track = false;
        sum += term;
        if (n > n0 && std::abs(term) <= eps * std::abs(sum)) {
            if (++quiet >= 2) return sum;
        } else {
            quiet = 0;
        }
    }
    throw Error(ErrorCode::NonConvergent, "hypergeometric series did not converge");
}

// One Taylor step of the hypergeometric equation from z0 by h; updates (f, df).
void ode_step(cplx a, cplx b, cplx c, cplx z0, cplx h, cplx& f, cplx& df)
{
    const cplx A = z0 * (1.0 - z0);
    const cplx B = 1.0 - 2.0 * z0;
    const cplx C = c - (a + b + 1.0) * z0;
    const double ah = std::abs(h);
    cplx u0 = f, u1 = df;
    cplx sf = u0 + u1 * h, sd = u1;
    cplx hn = h;  // h^(n+1)
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
        const double dn = n;
        cplx u2 = ((dn + a) * (dn + b) * u0 - (dn + 1.0) * (B * dn + C) * u1) / (A * ((dn + 1.0) * (dn + 2.0)));
        cplx tf = u2 * hn * h;
        cplx td = (dn + 2.0) * u2 * hn;
        sf += tf;
        sd += td;
        double mag = std::abs(tf) + std::abs(td) * ah;
        if (mag <= eps * (std::abs(sf) + std::abs(sd) * ah)) {
            if (++quiet >= 3) {
                f = sf;
                df = sd;
                return;
            }
        } else {
            quiet = 0;
        }
        u0 = u1;
        u1 = u2;
        hn *= h;
    }
    throw Error(ErrorCode::NonConvergent, "analytic continuation step did not converge");
}

// Analytic continuation along a path avoiding [1, inf), starting from the disc |z| = 1/2.
cplx continuation(cplx a, cplx b, cplx c, const CutComplex& z)
{
    const cplx zt = z.value;
    int s = side_sign(z);
    if (s == 0) s = 1;
    const cplx is(0.0, double(s));

    cplx start;
    std::vector<cplx> path;
    if (zt.real() <= direct_radius) {
        start = 0.5 * zt / std::abs(zt);
        path = {zt};
    } else {
        start = 0.35 + 0.35 * is;
        path = {0.5 + 0.5 * is, zt.real() + 0.5 * is, zt};
    }

    cplx f = series(a, b, c, start);
    cplx df = a * b * series(a + 1.0, b + 1.0, c + 1.0, start);
    cplx cur = start;
    for (cplx target : path) {
        int guard = 0;
        while (cur != target) {
            if (++guard > 100000) throw Error(ErrorCode::NonConvergent, "continuation path too long");
            cplx h = target - cur;
            double hmax = 0.25 * std::min(std::abs(cur), std::abs(1.0 - cur));
            bool last = std::abs(h) <= hmax;
            if (!last) h *= hmax / std::abs(h);
            ode_step(a, b, c, cur, h, f, df);
            cur = last ? target : cur + h;
        }
    }
    return f;
}

cplx around_one(cplx a, cplx b, cplx c, const CutComplex& z)
{
    const CutComplex w = map_cut(z, 1.0 - z.value, -1.0);
    const cplx s = c - a - b;
    cplx t1 = series(a, b, 1.0 - s, w.value) * rgamma(c - a) * rgamma(c - b);
    cplx t2 = pow_cut(w, s) * series(c - a, c - b, s + 1.0, w.value) * rgamma(a) * rgamma(b);
    return pi / sinpi(s) * (t1 - t2);
}

cplx around_infinity(cplx a, cplx b, cplx c, const CutComplex& z)
{
    const CutComplex mz = map_cut(z, -z.value, -1.0);
    const cplx iz = 1.0 / z.value;
    cplx t1 = pow_cut(mz, -a) * rgamma(b) * rgamma(c - a) * series(a, a - c + 1.0, a - b + 1.0, iz);
    cplx t2 = pow_cut(mz, -b) * rgamma(a) * rgamma(c - b) * series(b, b - c + 1.0, b - a + 1.0, iz);
    return pi / sinpi(b - a) * (t1 - t2);
}

}  // namespace

cplx hyp2f1_olver(cplx a, cplx b, cplx c, const CutComplex& z)
{
    const cplx zv = z.value;
    if (!std::isfinite(zv.real()) || !std::isfinite(zv.imag()))
        throw Error(ErrorCode::DomainError, "non-finite hypergeometric argument");
    if (zv.imag() == 0.0 && zv.real() > 1.0 && z.side == Side::Off)
        throw Error(ErrorCode::DomainError, "argument on the cut [1, inf) needs a side");
    if (zv == 0.0) return rgamma(c);
    if (zv == 1.0) {
        if ((c - a - b).real() > 0.0) return cgamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
        throw Error(ErrorCode::DomainError, "hypergeometric function diverges at z = 1");
    }

    const double az = std::abs(zv);
    if (az <= direct_radius) return series(a, b, c, zv);

    const cplx w = zv / (zv - 1.0);
    if (std::abs(w) <= direct_radius) return std::pow(1.0 - zv, -a) * series(a, c - b, c, w);

    if (std::abs(1.0 - zv) <= direct_radius && dist_to_int(c - a - b) >= degenerate_gap)
        return around_one(a, b, c, z);
    if (az >= 1.0 / direct_radius && dist_to_int(a - b) >= degenerate_gap)
        return around_infinity(a, b, c, z);
    return continuation(a, b, c, z);
}

void hyp2f1_olver_batch(cplx a, cplx b, cplx c, std::span<const CutComplex> z, std::span<cplx> out)
{
    if (out.size() < z.size()) throw Error(ErrorCode::InvalidArgument, "output span too short");
    std::vector<std::size_t> idx;
    double rmax = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double r = std::abs(z[i].value);
        if (r <= direct_radius && std::isfinite(r)) {
            idx.push_back(i);
            rmax = std::max(rmax, r);
        } else {
            out[i] = hyp2f1_olver(a, b, c, z[i]);
        }
    }
    if (idx.empty()) return;

    std::vector<cplx> coef{rgamma(c)};
    if (rmax > 0.0) {
        cplx term = coef[0], p = 1.0;
        bool track = c.real() < 0.5;
        double rn = 1.0, biggest = std::abs(term);
        const int n0 = int(std::abs(a) + std::abs(b) + std::abs(c)) + 4;
        int quiet = 0;
        for (int n = 0;; ++n) {
            if (n >= max_terms) throw Error(ErrorCode::NonConvergent, "batched series did not converge");
            cplx f = (a + double(n)) * (b + double(n)) / double(n + 1);
            if (f == 0.0) break;
            cplx cn = c + double(n);
            if (track) p *= f;
            if (std::abs(cn) < 0.5) {
                term = p * rgamma(cn + 1.0);
                track = false;
            } else {
                term *= f / cn;
            }
            if (track && cn.real() > 0.5) track = false;
            coef.push_back(term);
            rn *= rmax;
            double mag = std::abs(term) * rn;
            biggest = std::max(biggest, mag);
            if (n > n0 && mag <= 0x1p-60 * biggest) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
        }
    }

    std::vector<cplx> zs(idx.size()), res(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) zs[j] = z[idx[j]].value;
    simd::horner(coef.data(), coef.size(), zs.data(), res.data(), zs.size());
    for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] = res[j];
}

}  // namespace kgp
