#include "kgprop/antidesitter.hpp"

#include <cmath>
#include <numeric>

namespace kgp {

namespace {

void check_d(int d)
{
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 2");
}

int isgn(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Fill region, chart and signs from Z and dtau.
void classify(AdsPairGeometry& g)
{
    g.null_separated = std::abs(std::abs(g.Z) - 1.0) < 1e-10;
    const double m = std::abs(g.dtau);
    const int sig = g.dtau < 0.0 ? -1 : 1;
    const int k = int(std::floor(m / pi));
    const double start = k % 2 == 0 ? -1.0 : 1.0;  // sign of Z at |dtau| = k pi
    int j;
    if (std::abs(g.Z) < 1.0)
        j = 2 * k + 1;
    else if (start * g.Z > 1.0)
        j = 2 * k;
    else
        j = 2 * k + 2;
    g.region = sig * j;
    if (j % 2 == 0) {
        g.n = g.region / 2;
        g.s = g.s_tilde = 0;
    } else {
        // V_{2q+1} lies in W_q and W_{q+1}; take the one nearer to dtau / pi
        int q = (g.region - 1) / 2;
        if (g.region < 0) q = -((-g.region + 1) / 2);
        g.n = std::abs(g.dtau / pi - q) <= std::abs(g.dtau / pi - (q + 1)) ? q : q + 1;
        g.s = isgn(std::sin(m));
        g.s_tilde = isgn(std::sin(g.dtau));
    }
}

}  // namespace

AdsPairGeometry ads_pair(double Z, double dtau)
{
    AdsPairGeometry g;
    g.Z = Z;
    g.dtau = dtau;
    classify(g);
    return g;
}

AdsPairGeometry on_chart(const AdsPairGeometry& g, int n)
{
    bool ok = g.region == 2 * n || g.region == 2 * n - 1 || g.region == 2 * n + 1;
    if (!ok) throw Error(ErrorCode::ChartBoundary, "pair does not lie in the requested chart");
    AdsPairGeometry h = g;
    h.n = n;
    return h;
}

AdsPairGeometry ads_geometry(const AdsPoint& x, const AdsPoint& y)
{
    for (const AdsPoint* p : {&x, &y}) {
        if (!(p->u >= 0.0 && p->u < 0.5 * pi)) throw Error(ErrorCode::InvalidArgument, "u must lie in [0, pi/2)");
        double n2 = std::inner_product(p->omega.begin(), p->omega.end(), p->omega.begin(), 0.0);
        if (p->omega.empty() || std::abs(n2 - 1.0) > 1e-10)
            throw Error(ErrorCode::InvalidArgument, "omega must be a unit vector");
    }
    if (x.omega.size() != y.omega.size()) throw Error(ErrorCode::InvalidArgument, "points of different dimension");
    double c = std::clamp(std::inner_product(x.omega.begin(), x.omega.end(), y.omega.begin(), 0.0), -1.0, 1.0);
    const double dt = x.tau - y.tau;
    double Z = (-std::cos(dt) + std::sin(x.u) * std::sin(y.u) * c) / (std::cos(x.u) * std::cos(y.u));
    return ads_pair(Z, dt);
}

cplx ads_nu(int d, cplx m2)
{
    const double h = 0.5 * (d - 1);
    return std::sqrt(m2 + h * h);
}

cplx ads_prefactor(int d, cplx nu)
{
    const cplx c = 0.5 * (d - 1) + nu;
    return std::sqrt(pi) * cgamma(c) / (std::sqrt(2.0) * std::pow(2.0 * pi, 0.5 * d) * std::pow(cplx(2.0), nu));
}

namespace {

void check_eval(const AdsPairGeometry& g)
{
    if (g.null_separated) throw Error(ErrorCode::ChartBoundary, "|Z| = 1 separates the charts");
    if (!(g.region == 2 * g.n || g.region == 2 * g.n - 1 || g.region == 2 * g.n + 1))
        throw Error(ErrorCode::ChartBoundary, "chart index inconsistent with the region");
}

// Z_{d/2-1, nu}(-(-1)^n Z + sign * (-1)^n i0 * sig)
cplx z_on_chart(int d, cplx nu, const AdsPairGeometry& g, int sign, int sig)
{
    const double par = g.n % 2 == 0 ? 1.0 : -1.0;
    const double w = -par * g.Z;
    const int side = sign * int(par) * sig;
    const Side sd = side > 0 ? Side::Above : (side < 0 ? Side::Below : Side::Off);
    if (sd == Side::Off && w <= 1.0) throw Error(ErrorCode::ChartBoundary, "argument on the cut without a side");
    return gegenbauer_z({0.5 * d - 1.0, nu}, CutComplex(w, sd));
}

cplx phase(int d, cplx nu, int n, int sign)
{
    return std::exp(-double(sign) * I * double(n) * (0.5 * (d - 1) + nu) * pi);
}

// sign +1: branch continued from Im nu < 0, sign -1: from Im nu > 0
cplx resolvent_branch(int d, cplx nu, const AdsPairGeometry& g, int sign)
{
    const cplx P = ads_prefactor(d, nu);
    return double(sign) * I * P * phase(d, nu, std::abs(g.n), sign) * z_on_chart(d, nu, g, sign, g.s);
}

}  // namespace

cplx ads_resolvent(int d, cplx nu, const AdsPairGeometry& g)
{
    check_d(d);
    if (!(nu.real() > 0.0)) throw Error(ErrorCode::InvalidArgument, "Re nu must be positive");
    if (nu.imag() == 0.0) throw Error(ErrorCode::OnSpectrum, "nu^2 must not be real");
    check_eval(g);
    return resolvent_branch(d, nu, g, nu.imag() < 0.0 ? 1 : -1);
}

namespace {

int feynman_sign(PropagatorKind which)
{
    if (which == PropagatorKind::F || which == PropagatorKind::OpF) return 1;
    if (which == PropagatorKind::Fbar || which == PropagatorKind::OpFbar) return -1;
    throw Error(ErrorCode::InvalidArgument, "F or Fbar expected");
}

}  // namespace

cplx op_feynman_ads(int d, double nu, PropagatorKind which, const AdsPairGeometry& g)
{
    check_d(d);
    if (!(nu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be non-negative");
    const int sign = feynman_sign(which);
    check_eval(g);
    return resolvent_branch(d, nu, g, sign);
}

cplx op_feynman_ads_nu2(int d, double nu2, PropagatorKind which, const AdsPairGeometry& g)
{
    if (nu2 >= 0.0) return op_feynman_ads(d, std::sqrt(nu2), which, g);
    check_d(d);
    const int sign = feynman_sign(which);
    check_eval(g);
    return resolvent_branch(d, cplx(0.0, -sign * std::sqrt(-nu2)), g, sign);
}

cplx ads_pos_neg(int d, double nu, PropagatorKind which, const AdsPairGeometry& g)
{
    check_d(d);
    if (!(nu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be non-negative");
    check_eval(g);
    int sign;
    if (which == PropagatorKind::Pos)
        sign = 1;
    else if (which == PropagatorKind::Neg)
        sign = -1;
    else
        throw Error(ErrorCode::InvalidArgument, "ads_pos_neg takes Pos or Neg");
    return ads_prefactor(d, nu) * phase(d, nu, g.n, sign) * z_on_chart(d, nu, g, sign, g.s_tilde);
}

cplx ads_kernel(int d, double nu, PropagatorKind kind, const AdsPairGeometry& g)
{
    switch (kind) {
    case PropagatorKind::F:
    case PropagatorKind::Fbar:
    case PropagatorKind::OpF:
    case PropagatorKind::OpFbar:
        return op_feynman_ads(d, nu, kind, g);
    case PropagatorKind::Pos:
    case PropagatorKind::Neg:
        return ads_pos_neg(d, nu, kind, g);
    case PropagatorKind::Sym:
        return ads_pos_neg(d, nu, PropagatorKind::Pos, g) + ads_pos_neg(d, nu, PropagatorKind::Neg, g);
    default:
        break;
    }
    const cplx sum = op_feynman_ads(d, nu, PropagatorKind::F, g) + op_feynman_ads(d, nu, PropagatorKind::Fbar, g);
    switch (kind) {
    case PropagatorKind::Ret:
        return heaviside(g.dtau) * sum;
    case PropagatorKind::Adv:
        return heaviside(-g.dtau) * sum;
    case PropagatorKind::PJ:
        return sgn(g.dtau) * sum;
    default:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "kernel kind not available on AdS");
}

const char* to_string(PtRegime r)
{
    switch (r) {
    case PtRegime::EssentiallySelfAdjoint:
        return "EssentiallySelfAdjoint";
    case PtRegime::FriedrichsDistinguished:
        return "FriedrichsDistinguished";
    case PtRegime::UnboundedBelow:
        return "UnboundedBelow";
    }
    return "?";
}

PtReport pt_mode_analysis(int d, int l, double nu2)
{
    check_d(d);
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "l must be non-negative");
    if (d == 2 && l > 0) throw Error(ErrorCode::InvalidArgument, "d = 2 has only l = 0");
    PtReport r;
    r.nu2 = nu2;
    if (d == 2) {
        r.alpha = 0.5;
        r.alpha2 = 0.25;
    } else {
        r.alpha = l + 0.5 * (d - 3);
        r.alpha2 = r.alpha * r.alpha;
    }
    if (nu2 < 0.0)
        r.regime = PtRegime::UnboundedBelow;
    else if (nu2 < 1.0)
        r.regime = PtRegime::FriedrichsDistinguished;
    else
        r.regime = PtRegime::EssentiallySelfAdjoint;
    r.origin_artifact = r.alpha2 < 1.0;
    switch (r.regime) {
    case PtRegime::EssentiallySelfAdjoint:
        r.note = "unique dynamics; propagators agree with the resolvent boundary values";
        break;
    case PtRegime::FriedrichsDistinguished:
        r.note = "one-parameter family of boundary conditions at u = pi/2; Friedrichs extension distinguished";
        break;
    case PtRegime::UnboundedBelow:
        r.note = "all realizations unbounded below; no distinguished boundary condition at u = pi/2";
        break;
    }
    if (r.origin_artifact) r.note += "; alpha^2 < 1 at u = 0 is a coordinate artifact, no condition needed there";
    return r;
}

}  // namespace kgp
