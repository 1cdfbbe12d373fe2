#include "kgprop/schrodinger1d.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace kgp {

namespace odeint = boost::numeric::odeint;

Potential Potential::zero()
{
    Potential p;
    p.kind = Kind::Zero;
    p.decay_rate = 1.0;
    p.decay_const = 0.0;
    return p;
}

Potential Potential::scarf(double mu)
{
    Potential p;
    p.kind = Kind::Scarf;
    p.mu = mu;
    p.decay_rate = 2.0;
    p.decay_const = 4.0 * std::abs(mu * mu - 0.25);
    return p;
}

Potential Potential::poschl_teller(double alpha, double nu)
{
    Potential p;
    p.kind = Kind::PoschlTeller;
    p.pt_alpha = alpha;
    p.pt_nu = nu;
    p.decay_rate = 0.0;
    return p;
}

Potential Potential::tabulated(std::vector<double> grid, std::vector<double> values, double decay_rate,
                               double decay_const)
{
    if (grid.size() != values.size() || grid.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "tabulated potential needs matching grid and values");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw Error(ErrorCode::InvalidArgument, "tabulated grid must be increasing");
    Potential p;
    p.kind = Kind::Tabulated;
    p.grid = std::move(grid);
    p.values = std::move(values);
    p.decay_rate = decay_rate;
    p.decay_const = decay_const;
    return p;
}

Potential Potential::callable(std::function<double(double)> fn, double decay_rate, double decay_const)
{
    Potential p;
    p.kind = Kind::Callable;
    p.fn = std::move(fn);
    p.decay_rate = decay_rate;
    p.decay_const = decay_const;
    return p;
}

double Potential::operator()(double t) const
{
    switch (kind) {
    case Kind::Zero:
        return 0.0;
    case Kind::Scarf: {
        double c = std::cosh(t);
        return -(mu * mu - 0.25) / (c * c);
    }
    case Kind::PoschlTeller: {
        double s = std::sin(t), c = std::cos(t);
        return (pt_alpha * pt_alpha - 0.25) / (s * s) + (pt_nu * pt_nu - 0.25) / (c * c);
    }
    case Kind::Tabulated: {
        if (t <= grid.front() || t >= grid.back()) return 0.0;
        auto it = std::upper_bound(grid.begin(), grid.end(), t);
        std::size_t j = std::size_t(it - grid.begin());
        double x0 = grid[j - 1], x1 = grid[j];
        double w = (t - x0) / (x1 - x0);
        return (1.0 - w) * values[j - 1] + w * values[j];
    }
    case Kind::Callable:
        return fn(t);
    }
    return 0.0;
}

namespace {

constexpr double node_spacing = 0.05;
constexpr double ode_tol = 1e-12;

Cauchy propagate(const Potential& v, cplx k, double t0, double t1, Cauchy x)
{
    if (t0 == t1) return x;
    const cplx k2 = k * k;
    auto sys = [&](const Cauchy& y, Cauchy& dy, double t) {
        dy[0] = y[1];
        dy[1] = (v(t) + k2) * y[0];
    };
    // Linear equation: integrate the unit-normalised state so the tolerance acts relatively.
    const double scale = std::max(std::abs(x[0]), std::abs(x[1]));
    if (scale == 0.0) return x;
    x[0] /= scale;
    x[1] /= scale;
    double dt = std::copysign(std::min(0.01, std::abs(t1 - t0)), t1 - t0);
    try {
        odeint::integrate_adaptive(odeint::make_controlled(ode_tol, ode_tol, odeint::runge_kutta_dopri5<Cauchy>()),
                                   sys, x, t0, t1, dt);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SolverDiverged, e.what());
    }
    if (!std::isfinite(std::abs(x[0])) || !std::isfinite(std::abs(x[1])))
        throw Error(ErrorCode::SolverDiverged, "solution overflowed");
    x[0] *= scale;
    x[1] *= scale;
    return x;
}

cplx wronskian(const Cauchy& f, const Cauchy& g)
{
    return f[0] * g[1] - f[1] * g[0];
}

double wronskian_scale(const Cauchy& f, const Cauchy& g)
{
    return std::abs(f[0] * g[1]) + std::abs(f[1] * g[0]);
}

}  // namespace

SampledSolution::SampledSolution(std::shared_ptr<const Potential> v, cplx k, double T, double t0, Cauchy data0)
    : v_(std::move(v)), k_(k), T_(T)
{
    int n = int(std::ceil(2.0 * T / node_spacing));
    if (n % 2) ++n;
    n = std::max(n, 2);
    h_ = 2.0 * T / n;
    nodes_.assign(std::size_t(n + 1), Cauchy{});
    int j0 = int(std::lround((t0 + T) / h_));
    if (std::abs(-T + j0 * h_ - t0) > 1e-12 * std::max(1.0, T))
        throw Error(ErrorCode::InvalidArgument, "solution anchor must be a grid node");
    nodes_[std::size_t(j0)] = data0;
    Cauchy x = data0;
    for (int j = j0 + 1; j <= n; ++j) {
        x = propagate(*v_, k_, -T + (j - 1) * h_, -T + j * h_, x);
        nodes_[std::size_t(j)] = x;
    }
    x = data0;
    for (int j = j0 - 1; j >= 0; --j) {
        x = propagate(*v_, k_, -T + (j + 1) * h_, -T + j * h_, x);
        nodes_[std::size_t(j)] = x;
    }
}

Cauchy SampledSolution::at(double t) const
{
    if (nodes_.empty()) throw Error(ErrorCode::InvalidArgument, "empty sampled solution");
    long j = std::lround((t + T_) / h_);
    j = std::clamp(j, 0L, long(nodes_.size()) - 1);
    double tj = -T_ + double(j) * h_;
    return propagate(*v_, k_, tj, t, nodes_[std::size_t(j)]);
}

double matching_window(const Potential& v, const JostOptions& opt)
{
    if (!v.jost_admissible())
        throw Error(ErrorCode::NotJostAdmissible, "potential has no declared exponential decay");
    double T = 1.0;
    if (v.decay_const > 0.0) T = std::max(T, std::log(v.decay_const / opt.tail) / v.decay_rate);
    if (v.kind == Potential::Kind::Tabulated) T = std::max({T, std::abs(v.grid.front()), std::abs(v.grid.back())});
    if (T > opt.T_cap) throw Error(ErrorCode::DecayTooSlow, "matching window exceeds the cap");
    return T;
}

JostPair jost_solve(const Potential& v, cplx k, const JostOptions& opt)
{
    if (k.real() < 0.0 || k == 0.0) throw Error(ErrorCode::InvalidArgument, "Jost solutions need Re k >= 0, k != 0");
    const double T = matching_window(v, opt);
    auto vp = std::make_shared<const Potential>(v);
    const cplx e = std::exp(-k * T);
    JostPair p{k, T, SampledSolution(vp, k, T, T, {e, -k * e}), SampledSolution(vp, k, T, -T, {e, k * e})};
    return p;
}

cplx jost_function(const JostPair& pair)
{
    const double T = pair.T;
    double scale = 0.0;
    cplx w[3];
    const double ts[3] = {0.0, -0.5 * T, 0.5 * T};
    for (int i = 0; i < 3; ++i) {
        Cauchy p = pair.plus.at(ts[i]), m = pair.minus.at(ts[i]);
        w[i] = wronskian(p, m);
        scale = std::max(scale, wronskian_scale(p, m));
    }
    scale = std::max({scale, std::abs(pair.k), 1e-300});
    if (std::abs(w[1] - w[0]) > 1e-6 * scale || std::abs(w[2] - w[0]) > 1e-6 * scale)
        throw Error(ErrorCode::InconsistentWronskian, "Jost Wronskian is not constant");
    return w[0];
}

double wronskian_spread(const JostPair& pair, int samples)
{
    const double T = pair.T;
    cplx w0 = wronskian(pair.plus.at(0.0), pair.minus.at(0.0));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = -T + 2.0 * T * i / (samples - 1);
        worst = std::max(worst, std::abs(wronskian(pair.plus.at(t), pair.minus.at(t)) - w0));
    }
    return worst / std::abs(w0);
}

CanonicalBisolution::CanonicalBisolution(const Potential& v, cplx k, const JostOptions& opt)
{
    const double T = matching_window(v, opt);
    auto vp = std::make_shared<const Potential>(v);
    u1_ = SampledSolution(vp, k, T, 0.0, {1.0, 0.0});
    u2_ = SampledSolution(vp, k, T, 0.0, {0.0, 1.0});
    if (k != 0.0) {
        jost_ = jost_solve(v, k.real() < 0.0 ? -k : k, opt);
        w_jost_ = jost_function(jost_);
    }
}

cplx CanonicalBisolution::operator()(double t, double s) const
{
    if (t == s) return 0.0;
    Cauchy a = u1_.at(t), b = u2_.at(t), c = u1_.at(s), d = u2_.at(s);
    return a[0] * d[0] - b[0] * c[0];
}

cplx CanonicalBisolution::from_jost(double t, double s) const
{
    if (w_jost_ == 0.0) throw Error(ErrorCode::InvalidArgument, "no Jost basis at k = 0");
    Cauchy pt = jost_.plus.at(t), mt = jost_.minus.at(t), ps = jost_.plus.at(s), ms = jost_.minus.at(s);
    return (pt[0] * ms[0] - mt[0] * ps[0]) / w_jost_;
}

cplx canonical_bisolution(const Potential& v, cplx k, double t, double s)
{
    return CanonicalBisolution(v, k)(t, s);
}

cplx classical_green(const Potential& v, cplx k, Direction dir, double t, double s)
{
    if (dir == Direction::Forward) return t > s ? canonical_bisolution(v, k, t, s) : 0.0;
    return s > t ? -canonical_bisolution(v, k, t, s) : 0.0;
}

namespace {

void require_regular(cplx omega, cplx k)
{
    if (std::abs(omega) < 1e-10 * std::max(1.0, std::abs(k)))
        throw Error(ErrorCode::BoundStateHit, "Jost function vanishes: resolvent pole");
}

}  // namespace

cplx resolvent_kernel(const JostPair& pair, cplx omega, double t, double s)
{
    require_regular(omega, pair.k);
    if (t >= s) return pair.plus.at(t)[0] * pair.minus.at(s)[0] / omega;
    return pair.minus.at(t)[0] * pair.plus.at(s)[0] / omega;
}

cplx resolvent_kernel(const Potential& v, cplx k, double t, double s)
{
    if (k.real() <= 0.0) throw Error(ErrorCode::InvalidArgument, "resolvent needs Re k > 0");
    JostPair p = jost_solve(v, k);
    return resolvent_kernel(p, jost_function(p), t, s);
}

FeynmanKernels::FeynmanKernels(const Potential& v, double m, const JostOptions& opt)
    : m_(m),
      f_(jost_solve(v, cplx(0.0, m), opt)),
      fb_(f_),
      wf_(jost_function(f_)),
      wfb_(),
      bis_(v, cplx(0.0, m), opt)
{
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
    require_regular(wf_, f_.k);
    // k = -im: integrate the same equation with the conjugate boundary data.
    const double T = f_.T;
    auto vp = std::make_shared<const Potential>(v);
    const cplx k(0.0, -m);
    const cplx e = std::exp(-k * T);
    fb_ = JostPair{k, T, SampledSolution(vp, k, T, T, {e, -k * e}), SampledSolution(vp, k, T, -T, {e, k * e})};
    wfb_ = jost_function(fb_);
    require_regular(wfb_, k);
}

FeynmanPair FeynmanKernels::operator()(double t, double s) const
{
    return {resolvent_kernel(f_, wf_, t, s), resolvent_kernel(fb_, wfb_, t, s)};
}

cplx FeynmanKernels::forward_plus_backward(double t, double s) const
{
    cplx g = bis_(t, s);
    if (t > s) return g;
    if (s > t) return -g;
    return 0.0;
}

FeynmanPair feynman_kernels(const Potential& v, double m, double t, double s)
{
    return FeynmanKernels(v, m)(t, s);
}

namespace {

// Least-squares fit target = A*p + B*q over value and derivative at four points.
std::array<cplx, 2> match(const SampledSolution& target, const SampledSolution& p, const SampledSolution& q,
                          double T)
{
    const double pts[4] = {-0.5 * T, -0.25 * T, 0.25 * T, 0.5 * T};
    Eigen::MatrixXcd M(8, 2);
    Eigen::VectorXcd r(8);
    for (int i = 0; i < 4; ++i) {
        Cauchy a = p.at(pts[i]), b = q.at(pts[i]), y = target.at(pts[i]);
        for (int j = 0; j < 2; ++j) {
            M(2 * i + j, 0) = a[std::size_t(j)];
            M(2 * i + j, 1) = b[std::size_t(j)];
            r(2 * i + j) = y[std::size_t(j)];
        }
    }
    // Column scaling so the condition number reflects geometry, not normalisation.
    Eigen::Vector2d cs(M.col(0).norm(), M.col(1).norm());
    Eigen::MatrixXcd Ms = M * cs.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ms, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(1) <= 0.0 || sv(0) / sv(1) > 1e8)
        throw Error(ErrorCode::IllConditionedMatch, "Jost matching system is ill-conditioned");
    Eigen::Vector2cd x = svd.solve(r);
    return {x(0) / cs(0), x(1) / cs(1)};
}

}  // namespace

Scattering scattering_coefficients(const FeynmanKernels& fk)
{
    const auto& f = fk.pair_f();
    const auto& fb = fk.pair_fbar();
    auto p = match(f.plus, fb.minus, fb.plus, f.T);
    auto m = match(fb.plus, f.minus, f.plus, f.T);
    return {p[0], p[1], m[0], m[1]};
}

Scattering scattering_coefficients(const Potential& v, double m)
{
    return scattering_coefficients(FeynmanKernels(v, m));
}

double specialty_residual(const Potential& v, double m, const std::vector<std::array<double, 2>>& sample)
{
    FeynmanKernels fk(v, m);
    double worst = 0.0;
    for (const auto& ts : sample) {
        FeynmanPair g = fk(ts[0], ts[1]);
        worst = std::max(worst, std::abs(g.F + g.Fbar - fk.forward_plus_backward(ts[0], ts[1])));
    }
    return worst;
}

}  // namespace kgp
