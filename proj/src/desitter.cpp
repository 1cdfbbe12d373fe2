#include "kgprop/desitter.hpp"

#include <cmath>
#include <numeric>

namespace kgp {

const char* to_string(DsRegion r)
{
    switch (r) {
    case DsRegion::Vplus:
        return "V+";
    case DsRegion::Vminus:
        return "V-";
    case DsRegion::Aplus:
        return "A+";
    case DsRegion::Aminus:
        return "A-";
    case DsRegion::S:
        return "S";
    }
    return "?";
}

namespace {

void check_unit(const std::vector<double>& w)
{
    if (w.empty()) throw Error(ErrorCode::InvalidArgument, "omega must be non-empty");
    double n2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    if (std::abs(n2 - 1.0) > 1e-10) throw Error(ErrorCode::InvalidArgument, "omega must be a unit vector");
}

void check_d(int d)
{
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 2");
}

void check_nu(int d, cplx nu)
{
    if (nu.real() > 0.0) return;
    if (nu.real() < 0.0 || nu.imag() < 0.0)
        throw Error(ErrorCode::InvalidArgument, "nu must satisfy Re nu > 0 or lie in i[0, inf)");
    double k = nu.imag() - 0.5 * (d - 1);
    if (k > -1e-12 && std::abs(k - std::round(k)) < 1e-12)
        throw Error(ErrorCode::ExcludedParameter, "nu in i((d-1)/2 + N0): prefactor has a pole");
}

void check_off_cone(const DsPairGeometry& g)
{
    if (std::abs(std::abs(g.Z) - 1.0) < 1e-10) throw Error(ErrorCode::OnLightCone, "|Z| = 1");
}

GegenbauerParams params(int d, cplx lambda) { return {0.5 * d - 1.0, lambda}; }

}  // namespace

std::vector<double> embed(const DsPoint& x)
{
    check_unit(x.omega);
    std::vector<double> e(x.omega.size() + 1);
    e[0] = std::sinh(x.tau);
    for (std::size_t i = 0; i < x.omega.size(); ++i) e[i + 1] = std::cosh(x.tau) * x.omega[i];
    return e;
}

DsPoint antipode(const DsPoint& x)
{
    DsPoint a{-x.tau, x.omega};
    for (double& v : a.omega) v = -v;
    return a;
}

DsPairGeometry ds_pair(double Z, double t, double tA)
{
    DsPairGeometry g;
    g.Z = Z;
    g.t = t;
    g.tA = tA;
    g.null_separated = std::abs(std::abs(Z) - 1.0) < 1e-10;
    if (Z > 1.0)
        g.region = t > 0.0 ? DsRegion::Vplus : DsRegion::Vminus;
    else if (Z < -1.0)
        g.region = tA < 0.0 ? DsRegion::Aplus : DsRegion::Aminus;
    else
        g.region = DsRegion::S;
    return g;
}

DsPairGeometry ds_geometry(const DsPoint& x, const DsPoint& y)
{
    check_unit(x.omega);
    check_unit(y.omega);
    if (x.omega.size() != y.omega.size()) throw Error(ErrorCode::InvalidArgument, "points of different dimension");
    double c = std::inner_product(x.omega.begin(), x.omega.end(), y.omega.begin(), 0.0);
    c = std::clamp(c, -1.0, 1.0);
    double Z = -std::sinh(x.tau) * std::sinh(y.tau) + std::cosh(x.tau) * std::cosh(y.tau) * c;
    double x0 = std::sinh(x.tau), y0 = std::sinh(y.tau);
    return ds_pair(Z, x0 - y0, -(x0 + y0));
}

cplx ds_prefactor(int d, cplx nu)
{
    const double h = 0.5 * (d - 1);
    return cgamma(h + I * nu) * cgamma(h - I * nu) / std::pow(4.0 * pi, 0.5 * d);
}

namespace {

// Values of S_{d/2-1, i nu} needed by a kernel kind at one pair.
struct SValues {
    cplx sp, sm;    // S(-Z + i0), S(-Z - i0)
    cplx ap, am;    // S(Z + i0), S(Z - i0)
    cplx pos, neg;  // S(-Z + i0 sgn t), S(-Z - i0 sgn t)
};

bool needs_antipodal(PropagatorKind k) { return k == PropagatorKind::SymA || k == PropagatorKind::PJA; }

cplx combine(PropagatorKind kind, cplx C, const DsPairGeometry& g, const SValues& v)
{
    switch (kind) {
    case PropagatorKind::F:
        return I * C * v.sp;
    case PropagatorKind::Fbar:
        return -I * C * v.sm;
    case PropagatorKind::Pos:
        return C * v.pos;
    case PropagatorKind::Neg:
        return C * v.neg;
    case PropagatorKind::Sym:
        return C * (v.sp + v.sm);
    case PropagatorKind::SymA:
        return C * (v.ap + v.am);
    case PropagatorKind::PJ:
        return I * sgn(g.t) * C * (v.sp - v.sm);
    case PropagatorKind::PJA:
        return I * sgn(g.tA) * C * (v.ap - v.am);
    case PropagatorKind::Ret:
        return I * heaviside(g.t) * C * (v.sp - v.sm);
    case PropagatorKind::Adv:
        return I * heaviside(-g.t) * C * (v.sp - v.sm);
    default:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "kernel kind not available for the Euclidean state");
}

}  // namespace

cplx euclidean_kernel(int d, cplx nu, PropagatorKind kind, const DsPairGeometry& g)
{
    check_d(d);
    if (kind == PropagatorKind::OpF || kind == PropagatorKind::OpFbar) {
        if (nu.imag() != 0.0 || !(nu.real() > 0.0))
            throw Error(ErrorCode::InvalidArgument, "operator-theoretic kernels need real nu > 0");
        return op_feynman_ds(d, nu.real(), kind == PropagatorKind::OpF ? PropagatorKind::F : PropagatorKind::Fbar, g);
    }
    check_nu(d, nu);
    check_off_cone(g);
    const GegenbauerParams p = params(d, I * nu);
    SValues v;
    if (needs_antipodal(kind)) {
        v.ap = gegenbauer_s(p, CutComplex(g.Z, Side::Above));
        v.am = gegenbauer_s(p, CutComplex(g.Z, Side::Below));
    } else {
        v.sp = gegenbauer_s(p, CutComplex(-g.Z, Side::Above));
        v.sm = gegenbauer_s(p, CutComplex(-g.Z, Side::Below));
        double st = sgn(g.t);
        v.pos = st < 0.0 ? v.sm : v.sp;
        v.neg = st < 0.0 ? v.sp : v.sm;
    }
    return combine(kind, ds_prefactor(d, nu), g, v);
}

void euclidean_kernel_batch(int d, cplx nu, PropagatorKind kind, std::span<const DsPairGeometry> g,
                            std::span<cplx> out)
{
    check_d(d);
    if (out.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "output size mismatch");
    if (kind == PropagatorKind::OpF || kind == PropagatorKind::OpFbar) {
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = euclidean_kernel(d, nu, kind, g[i]);
        return;
    }
    check_nu(d, nu);
    for (const auto& gi : g) check_off_cone(gi);
    const GegenbauerParams p = params(d, I * nu);
    const double flip = needs_antipodal(kind) ? 1.0 : -1.0;
    std::vector<CutComplex> wp(g.size()), wm(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        wp[i] = CutComplex(flip * g[i].Z, Side::Above);
        wm[i] = CutComplex(flip * g[i].Z, Side::Below);
    }
    std::vector<cplx> sp(g.size()), sm(g.size());
    gegenbauer_s_batch(p, wp, sp);
    gegenbauer_s_batch(p, wm, sm);
    const cplx C = ds_prefactor(d, nu);
    for (std::size_t i = 0; i < g.size(); ++i) {
        SValues v;
        if (flip > 0.0) {
            v.ap = sp[i];
            v.am = sm[i];
        } else {
            v.sp = sp[i];
            v.sm = sm[i];
            bool neg_t = g[i].t < 0.0;
            v.pos = neg_t ? sm[i] : sp[i];
            v.neg = neg_t ? sp[i] : sm[i];
        }
        out[i] = combine(kind, C, g[i], v);
    }
}

namespace {

// Resolvent formula with lambda = s i nu, s = +1 for Im nu < 0 (and the F boundary value).
cplx resolvent_branch(int d, cplx nu, int s, const DsPairGeometry& g)
{
    check_off_cone(g);
    const cplx lam = double(s) * I * nu;
    const GegenbauerParams p = params(d, lam);
    const cplx pref = cgamma(0.5 * (d - 1) + lam) / (std::pow(cplx(2.0), 2.0 + lam) * std::pow(2.0 * pi, 0.5 * (d - 1)));
    const cplx zp = gegenbauer_z(p, CutComplex(-g.Z, Side::Above));
    const cplx zm = gegenbauer_z(p, CutComplex(-g.Z, Side::Below));
    if (d % 2 == 1) return double(s) * pref / std::sinh(pi * nu) * (zm - zp);
    return -pref / std::cosh(pi * nu) * (zp + zm);
}

}  // namespace

cplx ds_resolvent(int d, cplx nu, const DsPairGeometry& g)
{
    check_d(d);
    if (nu.real() < 0.0) throw Error(ErrorCode::InvalidArgument, "use the principal branch Re nu >= 0");
    if (nu.real() == 0.0) {
        const double mu = std::abs(nu.imag());
        const double shift = d % 2 == 1 ? 0.0 : 0.5;
        double k = mu - shift;
        if (k > -1e-12 && std::abs(k - std::round(k)) < 1e-12)
            throw Error(ErrorCode::OnSpectrum, "mu is a discrete eigenvalue of the tachyonic spectrum");
        return resolvent_branch(d, cplx(0.0, -mu), 1, g);
    }
    if (nu.imag() == 0.0) throw Error(ErrorCode::OnSpectrum, "real nu lies on the continuous spectrum");
    return resolvent_branch(d, nu, nu.imag() < 0.0 ? 1 : -1, g);
}

cplx op_feynman_ds(int d, double nu, PropagatorKind which, const DsPairGeometry& g)
{
    check_d(d);
    if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
    int s;
    if (which == PropagatorKind::F || which == PropagatorKind::OpF)
        s = 1;
    else if (which == PropagatorKind::Fbar || which == PropagatorKind::OpFbar)
        s = -1;
    else
        throw Error(ErrorCode::InvalidArgument, "op_feynman_ds takes F or Fbar");
    return resolvent_branch(d, nu, s, g);
}

AlphaBogoliubov alpha_bogoliubov(cplx alpha, cplx beta)
{
    if (!(std::abs(alpha) < 1.0) || !(std::abs(beta) < 1.0))
        throw Error(ErrorCode::InvalidArgument, "vacuum parameters need |alpha| < 1");
    double den = std::sqrt((1.0 - std::norm(alpha)) * (1.0 - std::norm(beta)));
    return {(1.0 - std::conj(beta) * alpha) / den, (std::conj(beta) - std::conj(alpha)) / den};
}

cplx alpha_twostate_kernel(int d, double nu, cplx alpha, cplx beta, PropagatorKind kind, const DsPairGeometry& g)
{
    check_d(d);
    if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
    if (!(std::abs(alpha) < 1.0) || !(std::abs(beta) < 1.0))
        throw Error(ErrorCode::InvalidArgument, "vacuum parameters need |alpha| < 1");
    const cplx ov = 1.0 - std::conj(beta) * alpha;
    if (std::abs(ov) < 1e-10) throw Error(ErrorCode::OverlapZero, "1 - conj(beta) alpha vanishes");
    check_off_cone(g);

    const cplx ab = alpha * std::conj(beta);
    const cplx sym = euclidean_kernel(d, nu, PropagatorKind::Sym, g);
    const cplx pj = euclidean_kernel(d, nu, PropagatorKind::PJ, g);
    const cplx symA = euclidean_kernel(d, nu, PropagatorKind::SymA, g);
    const cplx pjA = euclidean_kernel(d, nu, PropagatorKind::PJA, g);
    auto two_point = [&](double pm) {
        return (0.5 * (1.0 + ab) * sym - pm * I * 0.5 * (1.0 - ab) * pj + 0.5 * (alpha + std::conj(beta)) * symA -
                I * 0.5 * (alpha - std::conj(beta)) * pjA) /
               ov;
    };
    const cplx ret = heaviside(g.t) * pj, adv = -heaviside(-g.t) * pj;
    switch (kind) {
    case PropagatorKind::Pos:
        return two_point(1.0);
    case PropagatorKind::Neg:
        return two_point(-1.0);
    case PropagatorKind::F:
        return I * two_point(1.0) + adv;
    case PropagatorKind::Fbar:
        return -I * two_point(1.0) + ret;
    case PropagatorKind::Ret:
        return ret;
    case PropagatorKind::Adv:
        return adv;
    case PropagatorKind::PJ:
        return pj;
    case PropagatorKind::Sym:
        return two_point(1.0) + two_point(-1.0);
    default:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "kernel kind not available for two-state alpha vacua");
}

InOutVacua inout_vacua(int d, double nu)
{
    check_d(d);
    if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
    const double e = std::exp(-pi * nu);
    if (d % 2 == 1) {
        double a = ((d + 1) / 2) % 2 == 0 ? e : -e;
        return {a, a};
    }
    cplx am = I * ((d / 2) % 2 == 0 ? e : -e);
    return {am, -am};
}

ScarfModeMap scarf_mode_map(int d, int l)
{
    check_d(d);
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "l must be non-negative");
    ScarfModeMap m;
    m.alpha = l + 0.5 * (d - 2);
    m.reflectionless = d % 2 == 1;
    return m;
}

}  // namespace kgp
