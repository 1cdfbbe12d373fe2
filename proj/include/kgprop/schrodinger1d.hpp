#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "kgprop/core.hpp"

namespace kgp {

// H = -d^2/dt^2 + V(t). Green functions below invert H + k^2.
struct Potential {
    enum class Kind { Zero, Scarf, PoschlTeller, Tabulated, Callable };

    Kind kind = Kind::Zero;
    double mu = 0.5;                 // Scarf
    double pt_alpha = 0.5;           // Poschl-Teller on (0, pi/2)
    double pt_nu = 0.5;
    std::vector<double> grid;        // Tabulated
    std::vector<double> values;
    std::function<double(double)> fn;  // Callable
    double decay_rate = 1.0;         // |V(t)| <= decay_const * exp(-decay_rate |t|)
    double decay_const = 0.0;

    static Potential zero();
    static Potential scarf(double mu);
    static Potential poschl_teller(double alpha, double nu);
    static Potential tabulated(std::vector<double> grid, std::vector<double> values, double decay_rate,
                               double decay_const);
    static Potential callable(std::function<double(double)> fn, double decay_rate, double decay_const);

    double operator()(double t) const;
    bool jost_admissible() const { return kind != Kind::PoschlTeller && decay_rate > 0.0; }
};

using Cauchy = std::array<cplx, 2>;  // value, derivative

// A solution of psi'' = (V + k^2) psi sampled on a uniform grid over [-T, T].
class SampledSolution {
public:
    SampledSolution() = default;
    SampledSolution(std::shared_ptr<const Potential> v, cplx k, double T, double t0, Cauchy data0);

    Cauchy at(double t) const;
    double T() const { return T_; }

private:
    std::shared_ptr<const Potential> v_;
    cplx k_{};
    double T_ = 0.0;
    double h_ = 0.0;
    std::vector<Cauchy> nodes_;
};

struct JostPair {
    cplx k;
    double T = 0.0;
    SampledSolution plus;   // ~ exp(-k t) at +T
    SampledSolution minus;  // ~ exp(+k t) at -T
};

struct JostOptions {
    double tail = 1e-12;
    double T_cap = 200.0;
};

double matching_window(const Potential& v, const JostOptions& opt = {});

// Re(k) >= 0, k != 0. Purely imaginary k gives the oscillatory boundary data used for m^2 -+ i0.
JostPair jost_solve(const Potential& v, cplx k, const JostOptions& opt = {});
cplx jost_function(const JostPair& pair);
double wronskian_spread(const JostPair& pair, int samples = 41);

// Bisolution with G(t,t) = 0 and d_s G(t,s)|_{s=t} = 1.
class CanonicalBisolution {
public:
    CanonicalBisolution(const Potential& v, cplx k, const JostOptions& opt = {});
    cplx operator()(double t, double s) const;
    // Same kernel from the Jost basis, for cross-checks.
    cplx from_jost(double t, double s) const;

private:
    SampledSolution u1_, u2_;
    JostPair jost_;
    cplx w_jost_;
};

enum class Direction { Forward, Backward };

cplx canonical_bisolution(const Potential& v, cplx k, double t, double s);
cplx classical_green(const Potential& v, cplx k, Direction dir, double t, double s);

cplx resolvent_kernel(const JostPair& pair, cplx omega, double t, double s);
cplx resolvent_kernel(const Potential& v, cplx k, double t, double s);

struct FeynmanPair {
    cplx F;
    cplx Fbar;
};

// Jost data at k = +im (F) and k = -im (Fbar), reused over many (t, s).
class FeynmanKernels {
public:
    FeynmanKernels(const Potential& v, double m, const JostOptions& opt = {});
    FeynmanPair operator()(double t, double s) const;
    cplx forward_plus_backward(double t, double s) const;
    const JostPair& pair_f() const { return f_; }
    const JostPair& pair_fbar() const { return fb_; }
    cplx omega_f() const { return wf_; }
    cplx omega_fbar() const { return wfb_; }

private:
    double m_;
    JostPair f_, fb_;
    cplx wf_, wfb_;
    CanonicalBisolution bis_;
};

FeynmanPair feynman_kernels(const Potential& v, double m, double t, double s);

struct Scattering {
    cplx A_plus, B_plus, A_minus, B_minus;
};

Scattering scattering_coefficients(const Potential& v, double m);
Scattering scattering_coefficients(const FeynmanKernels& fk);

double specialty_residual(const Potential& v, double m, const std::vector<std::array<double, 2>>& sample);

}  // namespace kgp
