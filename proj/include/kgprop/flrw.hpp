#pragma once

#include <functional>
#include <vector>

#include "kgprop/schrodinger1d.hpp"

namespace kgp {

// Scale factor a(t) with its first two derivatives.
struct ScaleFactor {
    enum class Kind { Constant, Cosh, Bump, Exponential, Custom };
    Kind kind = Kind::Constant;
    double c = 1.0;  // Constant: a = c; Bump: a = 1 + c sech^2 t; Exponential: a = e^{c t}
    std::function<double(double)> fa, fda, fdda;  // Custom; derivatives may be empty
    double decay_rate = 0.0;                       // Custom: declared decay of V_lambda - V_inf
    double scale = 1.0;                            // Custom: time scale for finite differences

    static ScaleFactor constant(double c);
    static ScaleFactor cosh();
    static ScaleFactor bump(double A);
    static ScaleFactor exponential(double H);
    static ScaleFactor custom(std::function<double(double)> a, std::function<double(double)> da = {},
                              std::function<double(double)> dda = {}, double decay_rate = 0.0, double scale = 1.0);

    double a(double t) const;
    double da(double t) const;
    double dda(double t) const;
};

struct FlrwModel {
    ScaleFactor a;
    int d = 4;
    std::vector<double> spectrum;  // eigenvalues of minus the spatial Laplacian
};

// V_lambda(t) for the mode with Laplacian eigenvalue lambda, as a callable potential.
Potential mode_potential(const FlrwModel& model, double lambda);

// Common limit of V_lambda at t -> +-inf; throws NotJostAdmissible when there is none.
double asymptotic_potential(const FlrwModel& model, double lambda);

struct ModeReport {
    double lambda = 0.0;
    double v_inf = 0.0;
    double B_plus = 0.0, B_minus = 0.0;
    bool reflectionless = false;

    double B() const { return std::max(B_plus, B_minus); }
};

struct SpecialtyReport {
    std::vector<ModeReport> modes;
    bool special = false;
};

// V_lambda - V_inf with the effective mass sqrt(m^2 - V_inf).
struct ModeProblem {
    Potential v;
    double m_eff = 0.0;
    double v_inf = 0.0;
};

ModeProblem mode_problem(const FlrwModel& model, double m, double lambda);

// Scatters each mode at energy m^2 - V_inf against the decaying part of V_lambda.
SpecialtyReport specialty_scan(const FlrwModel& model, double m, const std::vector<double>& modes,
                               double tol = 1e-6);

// Scarf index alpha = sqrt(lambda + ((d-2)/2)^2) of the mode lambda for a = cosh t.
double cosh_mode_alpha(int d, double lambda);

}  // namespace kgp
