#include "doctest.h"

#include <cmath>

#include "kgprop/flrw.hpp"

using namespace kgp;

TEST_CASE("constant scale factor")
{
    FlrwModel m{ScaleFactor::constant(2.0), 4, {}};
    Potential v = mode_potential(m, 3.0);
    for (double t : {-3.0, 0.0, 1.7}) CHECK(v(t) == doctest::Approx(-0.75).epsilon(1e-15));
    auto rep = specialty_scan(m, 1.0, {0.0, 1.0, 5.0});
    CHECK(rep.special);
    for (auto& r : rep.modes) CHECK(r.B() < 1e-10);
}

TEST_CASE("cosh scale factor matches the Scarf family")
{
    for (int d : {2, 3, 4, 5, 6}) {
        FlrwModel m{ScaleFactor::cosh(), d, {}};
        for (int l = 0; l <= 4; ++l) {
            double lam = l * (l + d - 2.0);
            Potential v = mode_potential(m, lam);
            double vinf = asymptotic_potential(m, lam);
            CHECK(vinf == doctest::Approx(0.25 * (d - 1) * (d - 1)));
            double alpha = l + 0.5 * (d - 2);
            CHECK(cosh_mode_alpha(d, lam) == doctest::Approx(alpha));
            Potential s = Potential::scarf(alpha);
            double worst = 0.0;
            for (double t = -5.0; t <= 5.0; t += 0.01) worst = std::max(worst, std::abs(v(t) - vinf - s(t)));
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("linear in lambda with slope -1/a^2")
{
    FlrwModel m{ScaleFactor::bump(0.6), 4, {}};
    Potential v0 = mode_potential(m, 0.0), v1 = mode_potential(m, 1.0);
    for (double t : {-2.0, -0.3, 0.0, 0.9, 4.0}) {
        double a = m.a.a(t);
        CHECK(v1(t) - v0(t) == doctest::Approx(-1.0 / (a * a)).epsilon(1e-13));
    }
}

TEST_CASE("finite-difference derivatives")
{
    auto sf = ScaleFactor::custom([](double t) { return std::exp(t * t / 50.0); }, {}, {}, 0.0, 1.0);
    for (int d : {2, 3, 4}) {
        FlrwModel m{sf, d, {}};
        CHECK(std::abs(mode_potential(m, 0.0)(0.0) - 0.5 * (d - 1) * (2.0 / 50.0)) < 1e-7);
    }
    auto bump = ScaleFactor::bump(0.4);
    auto fd = ScaleFactor::custom([bump](double t) { return bump.a(t); });
    for (double t : {-1.0, 0.2, 2.0}) {
        CHECK(std::abs(fd.da(t) - bump.da(t)) < 1e-10);
        CHECK(std::abs(fd.dda(t) - bump.dda(t)) < 1e-6);
    }
}

TEST_CASE("gauge identity")
{
    // a^{(d-1)/2} (d_t^2 + (d-1) (a'/a) d_t + lambda/a^2 + m^2) a^{-(d-1)/2} f = f'' - V f + m^2 f
    const int d = 4;
    const double lam = 2.0, m2 = 1.3;
    FlrwModel model{ScaleFactor::bump(0.5), d, {}};
    Potential v = mode_potential(model, lam);
    auto f = [](double t) { return std::sin(1.3 * t) * std::exp(-0.1 * t * t); };
    auto g = [&](double t) { return std::pow(model.a.a(t), -0.5 * (d - 1)) * f(t); };
    auto residual = [&](double h) {
        double worst = 0.0;
        for (double t = -2.0; t <= 2.0; t += 0.25) {
            double g2 = (g(t + h) - 2 * g(t) + g(t - h)) / (h * h);
            double g1 = (g(t + h) - g(t - h)) / (2 * h);
            double lhs = std::pow(model.a.a(t), 0.5 * (d - 1)) *
                         (g2 + (d - 1) * model.a.da(t) / model.a.a(t) * g1 +
                          lam / std::pow(model.a.a(t), 2) * g(t) + m2 * g(t));
            double f2 = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
            double rhs = f2 - v(t) * f(t) + m2 * f(t);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return worst;
    };
    double r1 = residual(1e-2), r2 = residual(5e-3);
    CHECK(r1 < 1e-3);
    CHECK(std::log2(r1 / r2) > 1.8);
}

TEST_CASE("cosh specialty depends on dimension parity")
{
    auto modes = [](int d) {
        std::vector<double> v;
        for (int l = 0; l < 4; ++l) v.push_back(l * (l + d - 2.0));
        return v;
    };
    auto odd = specialty_scan(FlrwModel{ScaleFactor::cosh(), 3, {}}, 1.5, modes(3));
    CHECK(odd.special);
    for (auto& r : odd.modes) CHECK(r.B() < 1e-8);
    auto even = specialty_scan(FlrwModel{ScaleFactor::cosh(), 4, {}}, 2.0, modes(4));
    CHECK_FALSE(even.special);
    for (auto& r : even.modes) CHECK(r.B() > 1e-6);
}

TEST_CASE("bump scale factor scatters")
{
    auto rep = specialty_scan(FlrwModel{ScaleFactor::bump(0.5), 4, {}}, 1.0, {0.0, 3.0});
    CHECK_FALSE(rep.special);
}

TEST_CASE("non-decaying mode potentials are refused")
{
    FlrwModel m{ScaleFactor::exponential(1.0), 4, {}};
    try {
        specialty_scan(m, 1.0, {0.0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotJostAdmissible);
    }
    CHECK_THROWS_AS(specialty_scan(FlrwModel{ScaleFactor::cosh(), 4, {}}, 1.0, {0.0}), Error);
}
