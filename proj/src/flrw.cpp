#include "kgprop/flrw.hpp"

#include <cmath>
#include <memory>

#include "kgprop/parallel.hpp"

namespace kgp {

ScaleFactor ScaleFactor::constant(double c)
{
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
    ScaleFactor s;
    s.kind = Kind::Constant;
    s.c = c;
    return s;
}

ScaleFactor ScaleFactor::cosh()
{
    ScaleFactor s;
    s.kind = Kind::Cosh;
    return s;
}

ScaleFactor ScaleFactor::bump(double A)
{
    if (!(A > -1.0)) throw Error(ErrorCode::InvalidArgument, "bump amplitude must exceed -1 so that a > 0");
    ScaleFactor s;
    s.kind = Kind::Bump;
    s.c = A;
    return s;
}

ScaleFactor ScaleFactor::exponential(double H)
{
    ScaleFactor s;
    s.kind = Kind::Exponential;
    s.c = H;
    return s;
}

ScaleFactor ScaleFactor::custom(std::function<double(double)> a, std::function<double(double)> da,
                                std::function<double(double)> dda, double decay_rate, double scale)
{
    if (!a) throw Error(ErrorCode::InvalidArgument, "custom scale factor needs a(t)");
    ScaleFactor s;
    s.kind = Kind::Custom;
    s.fa = std::move(a);
    s.fda = std::move(da);
    s.fdda = std::move(dda);
    s.decay_rate = decay_rate;
    s.scale = scale;
    return s;
}

double ScaleFactor::a(double t) const
{
    switch (kind) {
    case Kind::Constant:
        return c;
    case Kind::Cosh:
        return std::cosh(t);
    case Kind::Bump: {
        double sh = 1.0 / std::cosh(t);
        return 1.0 + c * sh * sh;
    }
    case Kind::Exponential:
        return std::exp(c * t);
    case Kind::Custom:
        return fa(t);
    }
    return 0.0;
}

double ScaleFactor::da(double t) const
{
    switch (kind) {
    case Kind::Constant:
        return 0.0;
    case Kind::Cosh:
        return std::sinh(t);
    case Kind::Bump: {
        double sh = 1.0 / std::cosh(t);
        return -2.0 * c * sh * sh * std::tanh(t);
    }
    case Kind::Exponential:
        return c * std::exp(c * t);
    case Kind::Custom:
        if (fda) return fda(t);
        {
            double h = 1e-4 * scale;
            return (-fa(t + 2 * h) + 8 * fa(t + h) - 8 * fa(t - h) + fa(t - 2 * h)) / (12 * h);
        }
    }
    return 0.0;
}

double ScaleFactor::dda(double t) const
{
    switch (kind) {
    case Kind::Constant:
        return 0.0;
    case Kind::Cosh:
        return std::cosh(t);
    case Kind::Bump: {
        double sh = 1.0 / std::cosh(t), th = std::tanh(t);
        return -2.0 * c * sh * sh * (sh * sh - 2.0 * th * th);
    }
    case Kind::Exponential:
        return c * c * std::exp(c * t);
    case Kind::Custom:
        if (fdda) return fdda(t);
        {
            double h = 1e-4 * scale;
            return (-fa(t + 2 * h) + 16 * fa(t + h) - 30 * fa(t) + 16 * fa(t - h) - fa(t - 2 * h)) / (12 * h * h);
        }
    }
    return 0.0;
}

namespace {

void check_model(const FlrwModel& m)
{
    if (m.d < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 2");
}

double v_lambda(const ScaleFactor& sf, int d, double lambda, double t)
{
    double a = sf.a(t);
    if (!(a > 0.0)) throw Error(ErrorCode::DomainError, "scale factor must stay positive");
    double h = sf.da(t) / a;
    return 0.5 * (d - 1) * (sf.dda(t) / a + 0.5 * (d - 3) * h * h) - lambda / (a * a);
}

}  // namespace

Potential mode_potential(const FlrwModel& model, double lambda)
{
    check_model(model);
    ScaleFactor sf = model.a;
    int d = model.d;
    double rate = 0.0;
    if (model.a.kind == ScaleFactor::Kind::Cosh || model.a.kind == ScaleFactor::Kind::Bump) rate = 2.0;
    if (model.a.kind == ScaleFactor::Kind::Custom) rate = model.a.decay_rate;
    return Potential::callable([sf, d, lambda](double t) { return v_lambda(sf, d, lambda, t); }, rate, 0.0);
}

double asymptotic_potential(const FlrwModel& model, double lambda)
{
    check_model(model);
    const double h = 0.5 * (model.d - 1);
    switch (model.a.kind) {
    case ScaleFactor::Kind::Constant:
        return -lambda / (model.a.c * model.a.c);
    case ScaleFactor::Kind::Cosh:
        return h * h;
    case ScaleFactor::Kind::Bump:
        return -lambda;
    case ScaleFactor::Kind::Exponential:
        throw Error(ErrorCode::NotJostAdmissible, "exponential scale factor gives a non-decaying mode potential");
    case ScaleFactor::Kind::Custom: {
        if (!(model.a.decay_rate > 0.0))
            throw Error(ErrorCode::NotJostAdmissible, "custom scale factor has no declared decay");
        double far = 40.0 / model.a.decay_rate;
        double vp = v_lambda(model.a, model.d, lambda, far), vm = v_lambda(model.a, model.d, lambda, -far);
        if (std::abs(vp - vm) > 1e-8 * std::max(1.0, std::abs(vp)))
            throw Error(ErrorCode::NotJostAdmissible, "mode potential has different limits at +-inf");
        return 0.5 * (vp + vm);
    }
    }
    return 0.0;
}

double cosh_mode_alpha(int d, double lambda)
{
    double h = 0.5 * (d - 2);
    double a2 = lambda + h * h;
    if (a2 < 0.0) throw Error(ErrorCode::DomainError, "lambda below the Laplacian spectrum");
    return std::sqrt(a2);
}

namespace {

Potential shifted_potential(const FlrwModel& model, double lambda, double vinf)
{
    switch (model.a.kind) {
    case ScaleFactor::Kind::Constant:
        return Potential::zero();
    case ScaleFactor::Kind::Cosh:
        return Potential::scarf(cosh_mode_alpha(model.d, lambda));
    default:
        break;
    }
    double rate = model.a.kind == ScaleFactor::Kind::Bump ? 2.0 : model.a.decay_rate;
    ScaleFactor sf = model.a;
    int d = model.d;
    auto fn = [sf, d, lambda, vinf](double t) { return v_lambda(sf, d, lambda, t) - vinf; };
    double C = 0.0;
    for (double t = 0.0; t <= 30.0 / rate; t += 0.05 / rate)
        C = std::max(C, std::max(std::abs(fn(t)), std::abs(fn(-t))) * std::exp(rate * t));
    return Potential::callable(fn, rate, 2.0 * C + 1e-300);
}

}  // namespace

ModeProblem mode_problem(const FlrwModel& model, double m, double lambda)
{
    check_model(model);
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
    const double vinf = asymptotic_potential(model, lambda);
    if (m * m - vinf <= 0.0) throw Error(ErrorCode::PreconditionFailed, "m^2 must exceed the asymptotic mode potential");
    return {shifted_potential(model, lambda, vinf), std::sqrt(m * m - vinf), vinf};
}

SpecialtyReport specialty_scan(const FlrwModel& model, double m, const std::vector<double>& modes, double tol)
{
    check_model(model);
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
    SpecialtyReport rep;
    rep.modes.resize(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        rep.modes[i].lambda = modes[i];
        rep.modes[i].v_inf = asymptotic_potential(model, modes[i]);
        if (m * m - rep.modes[i].v_inf <= 0.0)
            throw Error(ErrorCode::PreconditionFailed, "m^2 must exceed the asymptotic mode potential");
    }
    parallel_for(modes.size(), [&](std::size_t i) {
        ModeReport& r = rep.modes[i];
        Potential v = shifted_potential(model, r.lambda, r.v_inf);
        Scattering sc = scattering_coefficients(v, std::sqrt(m * m - r.v_inf));
        r.B_plus = std::abs(sc.B_plus);
        r.B_minus = std::abs(sc.B_minus);
        r.reflectionless = r.B() < tol;
    });
    rep.special = std::all_of(rep.modes.begin(), rep.modes.end(), [](const ModeReport& r) { return r.reflectionless; });
    return rep;
}

}  // namespace kgp
