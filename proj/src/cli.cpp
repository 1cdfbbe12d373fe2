#include "kgprop/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kgprop/antidesitter.hpp"
#include "kgprop/desitter.hpp"
#include "kgprop/evolution.hpp"
#include "kgprop/flrw.hpp"
#include "kgprop/krein.hpp"
#include "kgprop/parallel.hpp"
#include "kgprop/schrodinger1d.hpp"
#include "kgprop/specfun.hpp"

namespace kgp::cli {

using json = nlohmann::json;
using PK = PropagatorKind;

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void invalid(const std::string& msg) { throw ValidationError(msg); }

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex(std::uint64_t h)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- json helpers

void only_fields(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) invalid("'" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) invalid("unknown field '" + where + "." + it.key() + "'");
    }
}

double to_real(const json& v, const std::string& name)
{
    if (!v.is_number()) invalid("'" + name + "' must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) invalid("'" + name + "' must be finite");
    return x;
}

double real_field(const json& j, const char* key, const std::string& where, std::optional<double> def = {})
{
    if (!j.contains(key)) {
        if (def) return *def;
        invalid("missing field '" + where + "." + key + "'");
    }
    return to_real(j.at(key), where + "." + key);
}

int int_field(const json& j, const char* key, const std::string& where, std::optional<int> def = {})
{
    if (!j.contains(key)) {
        if (def) return *def;
        invalid("missing field '" + where + "." + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) invalid("'" + where + "." + key + "' must be an integer");
    return v.get<int>();
}

cplx to_complex(const json& v, const std::string& name)
{
    if (v.is_number()) return to_real(v, name);
    if (v.is_array() && v.size() == 2) return {to_real(v[0], name + "[0]"), to_real(v[1], name + "[1]")};
    invalid("'" + name + "' must be a number or [re, im]");
}

std::vector<double> linspace(const json& j, const char* key, const std::string& where,
                             std::optional<std::vector<double>> def = {})
{
    if (!j.contains(key)) {
        if (def) return *def;
        invalid("missing grid axis '" + where + "." + key + "'");
    }
    const json& v = j.at(key);
    const std::string name = where + "." + key;
    if (!v.is_array() || v.size() != 3 || !v[2].is_number_integer())
        invalid("'" + name + "' must be [start, stop, count]");
    const double a = to_real(v[0], name), b = to_real(v[1], name);
    const int n = v[2].get<int>();
    if (n < 1 || n > 1000000) invalid("'" + name + "' count must lie in [1, 1000000]");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return out;
}

Mat matrix_field(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key)) invalid("missing field '" + where + "." + key + "'");
    const json& v = j.at(key);
    const std::string name = where + "." + key;
    if (!v.is_array() || v.empty()) invalid("'" + name + "' must be a non-empty array of rows");
    const auto n = Eigen::Index(v.size());
    Mat A(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!v[i].is_array() || Eigen::Index(v[i].size()) != n) invalid("'" + name + "' must be square");
        for (Eigen::Index k = 0; k < n; ++k) A(i, k) = to_complex(v[i][k], name);
    }
    if ((A - A.adjoint()).norm() > 1e-12 * std::max(1.0, A.norm())) invalid("'" + name + "' must be Hermitian");
    return A;
}

double min_eig(const Mat& L) { return Eigen::SelfAdjointEigenSolver<Mat>(L, Eigen::EigenvaluesOnly).eigenvalues()(0); }

Eigen::VectorXd lapse_field(const json& p, const std::string& where, Eigen::Index n)
{
    if (!p.contains("lapse")) return {};
    const json& v = p.at("lapse");
    if (!v.is_array() || Eigen::Index(v.size()) != n) invalid("'" + where + ".lapse' must have one entry per mode");
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i) = to_real(v[i], where + ".lapse");
        if (!(a(i) > 0.0)) invalid("lapse must be positive");
    }
    return a;
}

// ---------------------------------------------------------------- scenario

struct Scenario {
    std::string geometry;
    json params, grid, tol;
    std::uint64_t seed = 0;
    std::uint64_t hash = 0;

    double tolerance(const char* suite, double def) const
    {
        return tol.contains(suite) ? tol.at(suite).get<double>() : def;
    }
};

Scenario parse_scenario(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        invalid(std::string("scenario is not valid JSON: ") + e.what());
    }
    only_fields(j, "scenario", {"schema", "geometry", "parameters", "grid", "tolerances", "seed"});
    if (!j.contains("schema") || j["schema"] != scenario_schema)
        invalid(std::string("'schema' must be \"") + scenario_schema + "\"");
    Scenario s;
    if (!j.contains("geometry") || !j["geometry"].is_string()) invalid("missing field 'geometry'");
    s.geometry = j["geometry"].get<std::string>();
    static const char* geoms[] = {"static", "dynamics", "flrw", "ds", "ads", "line1d"};
    if (std::find_if(std::begin(geoms), std::end(geoms), [&](const char* g) { return s.geometry == g; }) ==
        std::end(geoms))
        invalid("unknown geometry '" + s.geometry + "'");
    s.params = j.value("parameters", json::object());
    s.grid = j.value("grid", json::object());
    s.tol = j.value("tolerances", json::object());
    only_fields(s.tol, "tolerances", {"identities", "connection", "krein", "specialty"});
    for (auto it = s.tol.begin(); it != s.tol.end(); ++it)
        if (!(to_real(it.value(), "tolerances." + it.key()) > 0.0)) invalid("tolerances must be positive");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) invalid("'seed' must be a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    s.hash = fnv1a(j.dump());
    return s;
}

// ---------------------------------------------------------------- tables and reports

struct Table {
    std::vector<std::string> columns;
    std::vector<std::string> rows;  // formatted, without newline
};

std::string join(const std::vector<std::string>& cells)
{
    std::string r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) r += ',';
        r += cells[i];
    }
    return r;
}

std::string render(const Table& t, const std::string& meta)
{
    std::string out = "# " + meta + "\n" + join(t.columns) + "\n";
    for (const auto& r : t.rows) out += r + "\n";
    return out;
}

struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass() const { return residual < tol; }
};

struct Report {
    std::vector<Check> checks;
    json extra = json::object();
};

bool singular(const Error& e)
{
    return e.code() == ErrorCode::OnLightCone || e.code() == ErrorCode::ChartBoundary ||
           e.code() == ErrorCode::NullSeparated;
}

// Evaluates f, mapping light-cone and chart-boundary points to NaN.
cplx guarded(const std::function<cplx()>& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (singular(e)) return {NAN, NAN};
        throw;
    }
}

void require_kind(PK kind, std::initializer_list<PK> allowed, const std::string& geometry)
{
    for (PK k : allowed)
        if (k == kind) return;
    invalid(std::string("kind ") + to_string(kind) + " is not available for geometry " + geometry);
}

struct Pair2 {
    double t, s;
};

std::vector<Pair2> ts_grid(const json& grid, const std::string& geometry)
{
    only_fields(grid, "grid", {"t", "s"});
    auto t = linspace(grid, "t", "grid"), s = linspace(grid, "s", "grid");
    std::vector<Pair2> out;
    for (double a : t)
        for (double b : s) out.push_back({a, b});
    (void)geometry;
    return out;
}

struct Kernels7 {
    cplx pos, neg, F, Fbar, ret, adv, PJ;
};

double identity_max(const Kernels7& k)
{
    double r = 0.0;
    r = std::max(r, std::abs(k.F - k.Fbar - I * (k.pos + k.neg)));
    r = std::max(r, std::abs(k.PJ - (k.ret - k.adv)));
    r = std::max(r, std::abs(k.PJ - I * (k.pos - k.neg)));
    r = std::max(r, std::abs(k.F - (I * k.pos + k.adv)));
    r = std::max(r, std::abs(k.F - (I * k.neg + k.ret)));
    r = std::max(r, std::abs(k.Fbar - (-I * k.pos + k.ret)));
    r = std::max(r, std::abs(k.Fbar - (-I * k.neg + k.adv)));
    return r;
}

double nan_max(double a, double b) { return std::isnan(b) ? a : std::max(a, b); }

Check krein_check(const Scenario& sc)
{
    std::mt19937_64 rng(sc.seed);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
        const int n = 2 + it % 7;
        auto pr = random_admissible_pair(n, rng);
        Mat Id = Mat::Identity(n, n);
        auto q = kato_projections(pr.S1, pr.S2);
        Mat P1m = 0.5 * (Id - pr.S1), P2m = 0.5 * (Id - pr.S2);
        worst = std::max(worst, (q.L12p * q.L12p - q.L12p).norm());
        worst = std::max(worst, (q.L12p + q.L12m - Id).norm());
        worst = std::max(worst, (P1m * q.L12p).norm());
        worst = std::max(worst, (q.L12p * P2m).norm());
        auto ang = angular_operators(pr.space, pr.S1, pr.S2);
        auto f = block_forms(ang);
        Mat U = upsilon(pr.S1, pr.S2);
        worst = std::max(worst, (to_s1_basis(ang, U) - f.upsilon).norm() / f.upsilon.norm());
        worst = std::max(worst, (to_s1_basis(ang, q.L12p) - f.L12p).norm() / f.L12p.norm());
        if (!(op_norm(ang.c) < 1.0)) worst = std::max(worst, 1.0);
    }
    return {"krein projections and block forms (20 random pairs)", worst, sc.tolerance("krein", 1e-9)};
}

// ---------------------------------------------------------------- line1d

Potential potential_field(const json& p)
{
    if (!p.contains("potential")) return Potential::zero();
    const json& v = p.at("potential");
    only_fields(v, "parameters.potential", {"kind", "mu"});
    if (!v.contains("kind") || !v["kind"].is_string()) invalid("missing field 'parameters.potential.kind'");
    const std::string kind = v["kind"];
    if (kind == "zero") return Potential::zero();
    if (kind == "scarf") {
        double mu = real_field(v, "mu", "parameters.potential");
        if (!(mu > 0.0)) invalid("Scarf index mu must be positive");
        return Potential::scarf(mu);
    }
    invalid("unknown or non-Jost-admissible potential kind '" + kind + "'");
}

struct Line1d {
    Potential v;
    double m;
    std::vector<Pair2> grid;

    explicit Line1d(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"potential", "m"});
        v = potential_field(sc.params);
        m = real_field(sc.params, "m", "parameters");
        if (!(m > 0.0)) invalid("mass m must be positive");
        grid = ts_grid(sc.grid, "line1d");
    }

    Table eval(PK kind) const
    {
        require_kind(kind, {PK::F, PK::Fbar, PK::Ret, PK::Adv, PK::PJ}, "line1d");
        FeynmanKernels fk(v, m);
        Table t{{"t", "s", "re", "im"}, std::vector<std::string>(grid.size())};
        parallel_for(grid.size(), [&](std::size_t i) {
            auto [a, b] = grid[i];
            cplx val;
            if (kind == PK::F)
                val = fk(a, b).F;
            else if (kind == PK::Fbar)
                val = fk(a, b).Fbar;
            else {
                cplx ps = fk.forward_plus_backward(a, b) * sgn(a - b);
                val = kind == PK::PJ ? ps : (kind == PK::Ret ? heaviside(a - b) * ps : -heaviside(b - a) * ps);
            }
            t.rows[i] = join({fmt(a), fmt(b), fmt(val.real()), fmt(val.imag())});
        });
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        if (name == "identities") {
            FeynmanKernels fk(v, m);
            double sym = 0.0, anti = 0.0;
            for (auto [a, b] : grid) {
                auto x = fk(a, b), y = fk(b, a);
                sym = std::max({sym, std::abs(x.F - y.F), std::abs(x.Fbar - y.Fbar)});
                anti = std::max(anti, std::abs(fk.forward_plus_backward(a, b) * sgn(a - b) +
                                               fk.forward_plus_backward(b, a) * sgn(b - a)));
            }
            const double tol = sc.tolerance("identities", 1e-8);
            r.checks = {{"F and Fbar symmetric", sym, tol}, {"PJ antisymmetric", anti, tol}};
        } else if (name == "specialty") {
            std::vector<std::array<double, 2>> pts;
            for (auto [a, b] : grid) pts.push_back({a, b});
            Scattering s = scattering_coefficients(v, m);
            r.checks = {{"F + Fbar = Ret + Adv", specialty_residual(v, m, pts), sc.tolerance("specialty", 1e-6)}};
            r.extra["B_plus"] = std::abs(s.B_plus);
            r.extra["B_minus"] = std::abs(s.B_minus);
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        } else {
            invalid("suite '" + name + "' is not available for geometry line1d");
        }
        return r;
    }
};

// ---------------------------------------------------------------- static

struct Static {
    StaticModel model;
    std::vector<Pair2> grid;
    double lmin;

    explicit Static(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"L", "lapse"});
        model.L = matrix_field(sc.params, "L", "parameters");
        model.lapse = lapse_field(sc.params, "parameters", model.L.rows());
        lmin = min_eig(model.L);
        grid = ts_grid(sc.grid, "static");
    }

    void require_stable(PK kind) const
    {
        if (!(lmin > 0.0))
            invalid(std::string("kind ") + to_string(kind) + " requires a positive definite L (stability)");
    }

    Table eval(PK kind) const
    {
        require_kind(kind, {PK::F, PK::Fbar, PK::Pos, PK::Neg, PK::Sym, PK::Ret, PK::Adv, PK::PJ, PK::OpF, PK::OpFbar},
                     "static");
        const bool classical = kind == PK::Ret || kind == PK::Adv || kind == PK::PJ;
        if (!classical && kind != PK::OpF && kind != PK::OpFbar) require_stable(kind);
        const auto n = model.L.rows();
        Table t{{"t", "s", "i", "j", "re", "im"}, std::vector<std::string>(grid.size())};
        parallel_for(grid.size(), [&](std::size_t g) {
            auto [a, b] = grid[g];
            Mat K = classical ? tachyonic_classical(model, kind, a, b) : static_kernels(model, kind, a, b);
            std::string block;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (!block.empty()) block += '\n';
                    block += join({fmt(a), fmt(b), std::to_string(i), std::to_string(j), fmt(K(i, j).real()),
                                   fmt(K(i, j).imag())});
                }
            t.rows[g] = block;
        });
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        if (name == "identities" || name == "specialty") {
            require_stable(PK::F);
            IdentityResiduals worst;
            for (auto [a, b] : grid) {
                auto x = static_identity_residuals(model, a, b);
                worst.relB = std::max(worst.relB, x.relB);
                worst.relC = std::max(worst.relC, x.relC);
                worst.relD = std::max(worst.relD, x.relD);
                worst.relE = std::max(worst.relE, x.relE);
                worst.specialty = std::max(worst.specialty, x.specialty);
            }
            if (name == "identities") {
                const double tol = sc.tolerance("identities", 1e-9);
                r.checks = {{"F - Fbar = i(Pos + Neg)", worst.relB, tol},
                            {"PJ = Ret - Adv = i(Pos - Neg)", worst.relC, tol},
                            {"F = i Pos + Adv = i Neg + Ret", worst.relD, tol},
                            {"Fbar = -i Pos + Ret = -i Neg + Adv", worst.relE, tol}};
            } else {
                r.checks = {{"F + Fbar = Ret + Adv", worst.specialty, sc.tolerance("specialty", 1e-9)}};
            }
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        } else {
            invalid("suite '" + name + "' is not available for geometry static");
        }
        return r;
    }
};

// ---------------------------------------------------------------- dynamics

struct Dynamics {
    DynamicsFamily fam;
    std::vector<Pair2> grid;

    explicit Dynamics(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"L_minus", "L_plus", "t_minus", "t_plus", "lapse"});
        Mat Lm = matrix_field(sc.params, "L_minus", "parameters");
        Mat Lp = matrix_field(sc.params, "L_plus", "parameters");
        if (Lm.rows() != Lp.rows()) invalid("L_minus and L_plus must have the same size");
        if (!(min_eig(Lm) > 0.0) || !(min_eig(Lp) > 0.0))
            invalid("asymptotic L_minus and L_plus must be positive definite (stability)");
        const double t0 = real_field(sc.params, "t_minus", "parameters", -1.0);
        const double t1 = real_field(sc.params, "t_plus", "parameters", 1.0);
        if (!(t0 < t1)) invalid("t_minus must be smaller than t_plus");
        const auto n = Lm.rows();
        fam.lapse = lapse_field(sc.params, "parameters", n);
        auto Lof = [=](double t) {
            double x = std::clamp((2.0 * t - t0 - t1) / (t1 - t0), -1.0, 1.0);
            double w = 0.5 + 0.75 * x - 0.25 * x * x * x;
            return Mat((1.0 - w) * Lm + w * Lp);
        };
        fam.B = [=](double t) { return first_order_generator(Mat::Zero(n, n), Lof(t)); };
        fam.t_minus = t0;
        fam.t_plus = t1;
        fam.B_minus = fam.B(t0);
        fam.B_plus = fam.B(t1);
        grid = ts_grid(sc.grid, "dynamics");
    }

    std::vector<TwoStateKernels> kernels() const
    {
        std::vector<TwoStateKernels> out(grid.size());
        parallel_for(grid.size(), [&](std::size_t g) {
            auto [a, b] = grid[g];
            out[g] = two_state_kernels(dynamics(fam, a, b), inout_projections(fam, a), a, b, fam.lapse);
        });
        return out;
    }

    Table eval(PK kind) const
    {
        require_kind(kind, {PK::F, PK::Fbar, PK::Pos, PK::Neg, PK::Ret, PK::Adv, PK::PJ}, "dynamics");
        auto ks = kernels();
        Table t{{"t", "s", "i", "j", "re", "im"}, std::vector<std::string>(grid.size())};
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const TwoStateKernels& k = ks[g];
            const Mat& K = kind == PK::F      ? k.F
                           : kind == PK::Fbar ? k.Fbar
                           : kind == PK::Pos  ? k.pos
                           : kind == PK::Neg  ? k.neg
                           : kind == PK::Ret  ? k.ret
                           : kind == PK::Adv  ? k.adv
                                              : k.PJ;
            std::string block;
            for (Eigen::Index i = 0; i < K.rows(); ++i)
                for (Eigen::Index j = 0; j < K.cols(); ++j) {
                    if (!block.empty()) block += '\n';
                    block += join({fmt(grid[g].t), fmt(grid[g].s), std::to_string(i), std::to_string(j),
                                   fmt(K(i, j).real()), fmt(K(i, j).imag())});
                }
            t.rows[g] = block;
        }
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        if (name == "identities" || name == "specialty") {
            IdentityResiduals worst;
            for (const auto& k : kernels()) {
                auto x = identity_residuals(k);
                worst.relB = std::max(worst.relB, x.relB);
                worst.relC = std::max(worst.relC, x.relC);
                worst.relD = std::max(worst.relD, x.relD);
                worst.relE = std::max(worst.relE, x.relE);
                worst.specialty = std::max(worst.specialty, x.specialty);
            }
            if (name == "identities") {
                const double tol = sc.tolerance("identities", 1e-8);
                r.checks = {{"F - Fbar = i(Pos + Neg)", worst.relB, tol},
                            {"PJ = Ret - Adv = i(Pos - Neg)", worst.relC, tol},
                            {"F = i Pos + Adv = i Neg + Ret", worst.relD, tol},
                            {"Fbar = -i Pos + Ret = -i Neg + Adv", worst.relE, tol},
                            {"Bogoliubov pseudounitarity", bogoliubov_blocks(fam).pseudounitarity, tol}};
            } else {
                r.checks = {{"F + Fbar = Ret + Adv", worst.specialty, sc.tolerance("specialty", 1e-8)}};
            }
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        } else {
            invalid("suite '" + name + "' is not available for geometry dynamics");
        }
        return r;
    }
};

// ---------------------------------------------------------------- flrw

struct Flrw {
    FlrwModel model;
    double m;
    std::vector<double> modes;
    std::vector<Pair2> grid;

    explicit Flrw(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"scale", "d", "m", "modes"});
        if (!sc.params.contains("scale")) invalid("missing field 'parameters.scale'");
        const json& a = sc.params["scale"];
        only_fields(a, "parameters.scale", {"kind", "c"});
        const std::string kind = a.value("kind", "");
        if (kind == "constant") {
            double c = real_field(a, "c", "parameters.scale", 1.0);
            if (!(c > 0.0)) invalid("constant scale factor must be positive");
            model.a = ScaleFactor::constant(c);
        } else if (kind == "cosh") {
            model.a = ScaleFactor::cosh();
        } else if (kind == "bump") {
            double c = real_field(a, "c", "parameters.scale");
            if (!(c > -1.0)) invalid("bump amplitude must exceed -1 so that a > 0");
            model.a = ScaleFactor::bump(c);
        } else if (kind == "exponential") {
            invalid("exponential scale factor gives non-decaying mode potentials (not Jost admissible)");
        } else {
            invalid("unknown scale factor kind '" + kind + "'");
        }
        model.d = int_field(sc.params, "d", "parameters");
        if (model.d < 2) invalid("dimension d must be at least 2");
        m = real_field(sc.params, "m", "parameters");
        if (!(m > 0.0)) invalid("mass m must be positive");
        if (!sc.params.contains("modes") || !sc.params["modes"].is_array() || sc.params["modes"].empty())
            invalid("'parameters.modes' must be a non-empty array of Laplacian eigenvalues");
        for (const json& x : sc.params["modes"]) {
            double l = to_real(x, "parameters.modes");
            if (l < 0.0) invalid("Laplacian eigenvalues must be non-negative");
            modes.push_back(l);
        }
        for (double l : modes)
            if (m * m <= asymptotic_potential(model, l))
                invalid("m^2 must exceed the asymptotic mode potential for every mode");
        grid = sc.grid.empty() ? std::vector<Pair2>{} : ts_grid(sc.grid, "flrw");
    }

    Table eval(PK kind) const
    {
        require_kind(kind, {PK::F, PK::Fbar, PK::Ret, PK::Adv, PK::PJ}, "flrw");
        if (grid.empty()) invalid("eval needs 'grid.t' and 'grid.s'");
        Table t{{"lambda", "t", "s", "re", "im"}, std::vector<std::string>(modes.size() * grid.size())};
        for (std::size_t k = 0; k < modes.size(); ++k) {
            ModeProblem mp = mode_problem(model, m, modes[k]);
            FeynmanKernels fk(mp.v, mp.m_eff);
            parallel_for(grid.size(), [&](std::size_t i) {
                auto [a, b] = grid[i];
                cplx val;
                if (kind == PK::F)
                    val = fk(a, b).F;
                else if (kind == PK::Fbar)
                    val = fk(a, b).Fbar;
                else {
                    cplx ps = fk.forward_plus_backward(a, b) * sgn(a - b);
                    val = kind == PK::PJ ? ps : (kind == PK::Ret ? heaviside(a - b) * ps : -heaviside(b - a) * ps);
                }
                t.rows[k * grid.size() + i] = join({fmt(modes[k]), fmt(a), fmt(b), fmt(val.real()), fmt(val.imag())});
            });
        }
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        if (name == "specialty") {
            const double tol = sc.tolerance("specialty", 1e-6);
            auto rep = specialty_scan(model, m, modes, tol);
            double worst = 0.0;
            json per = json::array();
            for (const auto& md : rep.modes) {
                worst = std::max(worst, md.B());
                per.push_back({{"lambda", md.lambda},
                               {"B_plus", md.B_plus},
                               {"B_minus", md.B_minus},
                               {"reflectionless", md.reflectionless}});
            }
            r.checks = {{"max reflection |B| over modes", worst, tol}};
            r.extra["modes"] = per;
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        } else {
            invalid("suite '" + name + "' is not available for geometry flrw");
        }
        return r;
    }
};

// ---------------------------------------------------------------- de Sitter

struct DeSitter {
    int d;
    double nu;
    std::optional<std::pair<cplx, cplx>> vacua;
    std::vector<double> taus, thetas;

    explicit DeSitter(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"d", "nu", "alpha", "beta"});
        d = int_field(sc.params, "d", "parameters");
        if (d < 2) invalid("dimension d must be at least 2");
        nu = real_field(sc.params, "nu", "parameters");
        if (!(nu > 0.0)) invalid("nu must be positive");
        if (sc.params.contains("alpha") || sc.params.contains("beta")) {
            cplx a = sc.params.contains("alpha") ? to_complex(sc.params["alpha"], "parameters.alpha") : 0.0;
            cplx b = sc.params.contains("beta") ? to_complex(sc.params["beta"], "parameters.beta") : 0.0;
            if (!(std::abs(a) < 1.0)) invalid("vacuum parameter violates |alpha| < 1");
            if (!(std::abs(b) < 1.0)) invalid("vacuum parameter violates |beta| < 1");
            if (std::abs(1.0 - std::conj(b) * a) < 1e-10) invalid("vacua have vanishing overlap (1 - conj(beta) alpha = 0)");
            vacua = std::pair{a, b};
        }
        only_fields(sc.grid, "grid", {"tau", "theta"});
        taus = linspace(sc.grid, "tau", "grid");
        thetas = linspace(sc.grid, "theta", "grid");
    }

    DsPairGeometry geom(double tau, double theta) const
    {
        std::vector<double> w(d, 0.0), e(d, 0.0);
        w[0] = std::cos(theta);
        w[1] = std::sin(theta);
        e[0] = 1.0;
        return ds_geometry(DsPoint{tau, w}, DsPoint{0.0, e});
    }

    std::vector<DsPairGeometry> geoms() const
    {
        std::vector<DsPairGeometry> g;
        for (double a : taus)
            for (double b : thetas) g.push_back(geom(a, b));
        return g;
    }

    cplx kernel(PK kind, const DsPairGeometry& g) const
    {
        if (vacua) return alpha_twostate_kernel(d, nu, vacua->first, vacua->second, kind, g);
        return euclidean_kernel(d, nu, kind, g);
    }

    Table eval(PK kind) const
    {
        if (vacua)
            require_kind(kind, {PK::F, PK::Fbar, PK::Pos, PK::Neg, PK::Ret, PK::Adv, PK::PJ, PK::Sym}, "ds");
        auto gs = geoms();
        std::vector<cplx> vals(gs.size(), cplx(NAN, NAN));
        if (!vacua && kind != PK::OpF && kind != PK::OpFbar) {
            std::vector<DsPairGeometry> ok;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < gs.size(); ++i)
                if (!gs[i].null_separated) ok.push_back(gs[i]), idx.push_back(i);
            std::vector<cplx> out(ok.size());
            euclidean_kernel_batch(d, nu, kind, ok, out);
            for (std::size_t i = 0; i < ok.size(); ++i) vals[idx[i]] = out[i];
        } else {
            parallel_for(gs.size(), [&](std::size_t i) { vals[i] = guarded([&] { return kernel(kind, gs[i]); }); });
        }
        Table t{{"tau", "theta", "Z", "region", "re", "im"}, std::vector<std::string>(gs.size())};
        for (std::size_t i = 0; i < gs.size(); ++i)
            t.rows[i] = join({fmt(taus[i / thetas.size()]), fmt(thetas[i % thetas.size()]), fmt(gs[i].Z),
                              to_string(gs[i].region), fmt(vals[i].real()), fmt(vals[i].imag())});
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        auto gs = geoms();
        if (name == "identities") {
            std::vector<double> res(gs.size(), 0.0);
            parallel_for(gs.size(), [&](std::size_t i) {
                if (gs[i].null_separated) return;
                auto K = [&](PK k) { return kernel(k, gs[i]); };
                Kernels7 k{K(PK::Pos), K(PK::Neg), K(PK::F), K(PK::Fbar), K(PK::Ret), K(PK::Adv), K(PK::PJ)};
                res[i] = identity_max(k);
            });
            r.checks = {{"two-point identities", *std::max_element(res.begin(), res.end()),
                         sc.tolerance("identities", 1e-8)}};
        } else if (name == "specialty") {
            double worst = 0.0;
            int count = 0;
            for (const auto& g : gs) {
                if (g.region != DsRegion::S || g.null_separated) continue;
                ++count;
                worst = nan_max(worst, std::abs(op_feynman_ds(d, nu, PK::F, g) + op_feynman_ds(d, nu, PK::Fbar, g)));
            }
            r.checks = {{"max |F + Fbar| at spacelike separation", worst, sc.tolerance("specialty", 1e-9)}};
            r.extra["spacelike_points"] = count;
        } else if (name == "connection") {
            double worst = 0.0;
            for (const auto& g : gs) {
                if (g.null_separated) continue;
                for (Side s : {Side::Above, Side::Below}) {
                    auto c = check_connection_formulas({0.5 * d - 1.0, cplx(0.0, nu)}, CutComplex(g.Z, s));
                    worst = std::max({worst, c[0], c[1], c[2]});
                }
            }
            r.checks = {{"Gegenbauer connection formulas on sampled Z", worst, sc.tolerance("connection", 1e-9)}};
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        }
        return r;
    }
};

// ---------------------------------------------------------------- anti-de Sitter

struct AntiDeSitter {
    int d;
    double nu2;
    double ref_tau = 0.0, ref_u = 0.0;
    std::vector<double> taus, us, thetas;

    explicit AntiDeSitter(const Scenario& sc)
    {
        only_fields(sc.params, "parameters", {"d", "nu", "m2", "reference"});
        d = int_field(sc.params, "d", "parameters");
        if (d < 2) invalid("dimension d must be at least 2");
        if (sc.params.contains("nu") == sc.params.contains("m2"))
            invalid("give exactly one of 'parameters.nu' and 'parameters.m2'");
        if (sc.params.contains("nu")) {
            double nu = real_field(sc.params, "nu", "parameters");
            if (!(nu > 0.0)) invalid("nu must be positive");
            nu2 = nu * nu;
        } else {
            nu2 = real_field(sc.params, "m2", "parameters") + 0.25 * (d - 1) * (d - 1);
        }
        if (sc.params.contains("reference")) {
            const json& r = sc.params["reference"];
            only_fields(r, "parameters.reference", {"tau", "u"});
            ref_tau = real_field(r, "tau", "parameters.reference", 0.0);
            ref_u = real_field(r, "u", "parameters.reference", 0.0);
        }
        only_fields(sc.grid, "grid", {"tau", "u", "theta"});
        taus = linspace(sc.grid, "tau", "grid");
        us = linspace(sc.grid, "u", "grid");
        thetas = linspace(sc.grid, "theta", "grid", std::vector<double>{0.0});
        for (double u : us)
            if (!(u >= 0.0 && u < 0.5 * pi)) invalid("grid values of u must lie in [0, pi/2)");
        if (!(ref_u >= 0.0 && ref_u < 0.5 * pi)) invalid("reference u must lie in [0, pi/2)");
        if (d == 2)
            for (double th : thetas)
                if (th != 0.0 && th != pi) invalid("for d = 2 theta must be 0 or pi");
    }

    struct Sample {
        double tau, u, theta;
        AdsPairGeometry g;
    };

    std::vector<Sample> samples() const
    {
        std::vector<Sample> out;
        for (double a : taus)
            for (double u : us)
                for (double th : thetas) {
                    double Z = (-std::cos(a - ref_tau) + std::sin(u) * std::sin(ref_u) * std::cos(th)) /
                               (std::cos(u) * std::cos(ref_u));
                    out.push_back({a, u, th, ads_pair(Z, a - ref_tau)});
                }
        return out;
    }

    double nu() const { return std::sqrt(nu2); }

    cplx kernel(PK kind, const AdsPairGeometry& g) const
    {
        if (kind == PK::F || kind == PK::Fbar || kind == PK::OpF || kind == PK::OpFbar)
            return op_feynman_ads_nu2(d, nu2, kind, g);
        return ads_kernel(d, nu(), kind, g);
    }

    void require_real_nu(const std::string& what) const
    {
        if (nu2 < 0.0) invalid(what + " needs nu^2 >= 0; below the bound only F and Fbar exist");
    }

    Table eval(PK kind) const
    {
        require_kind(kind, {PK::F, PK::Fbar, PK::OpF, PK::OpFbar, PK::Pos, PK::Neg, PK::Ret, PK::Adv, PK::PJ, PK::Sym},
                     "ads");
        if (kind != PK::F && kind != PK::Fbar && kind != PK::OpF && kind != PK::OpFbar)
            require_real_nu(std::string("kind ") + to_string(kind));
        auto ss = samples();
        Table t{{"tau", "tau_ref", "u", "u_ref", "theta", "Z", "n", "region", "re", "im"},
                std::vector<std::string>(ss.size())};
        parallel_for(ss.size(), [&](std::size_t i) {
            const Sample& s = ss[i];
            cplx v = guarded([&] { return kernel(kind, s.g); });
            t.rows[i] = join({fmt(s.tau), fmt(ref_tau), fmt(s.u), fmt(ref_u), fmt(s.theta), fmt(s.g.Z),
                              std::to_string(s.g.n), "V" + std::to_string(s.g.region), fmt(v.real()), fmt(v.imag())});
        });
        return t;
    }

    Report suite(const Scenario& sc, const std::string& name) const
    {
        Report r;
        auto ss = samples();
        if (name == "identities") {
            require_real_nu("identities suite");
            std::vector<double> res(ss.size(), 0.0);
            parallel_for(ss.size(), [&](std::size_t i) {
                const auto& g = ss[i].g;
                if (g.null_separated) return;
                auto K = [&](PK k) { return kernel(k, g); };
                Kernels7 k{K(PK::Pos), K(PK::Neg), K(PK::F), K(PK::Fbar), K(PK::Ret), K(PK::Adv), K(PK::PJ)};
                res[i] = identity_max(k);
            });
            double gl = 0.0;
            for (const auto& s : ss) {
                if (s.g.null_separated || s.g.region % 2 == 0) continue;
                int a = s.g.region >= 0 ? (s.g.region - 1) / 2 : -((-s.g.region + 1) / 2);
                cplx x = kernel(PK::F, on_chart(s.g, a)), y = kernel(PK::F, on_chart(s.g, a + 1));
                gl = std::max(gl, std::abs(x - y) / std::max(1e-300, std::abs(x)));
            }
            const double tol = sc.tolerance("identities", 1e-8);
            r.checks = {{"two-point identities", *std::max_element(res.begin(), res.end()), tol},
                        {"chart gluing on overlaps", gl, tol}};
        } else if (name == "specialty") {
            require_real_nu("specialty suite");
            double worst = 0.0;
            int count = 0;
            for (const auto& s : ss) {
                if (s.g.region != 0 || s.g.null_separated) continue;
                ++count;
                worst = std::max(worst, std::abs(kernel(PK::F, s.g) + kernel(PK::Fbar, s.g)));
            }
            r.checks = {{"max |F + Fbar| on V0", worst, sc.tolerance("specialty", 1e-9)}};
            r.extra["v0_points"] = count;
        } else if (name == "connection") {
            require_real_nu("connection suite");
            double worst = 0.0;
            for (const auto& s : ss) {
                if (s.g.null_separated) continue;
                const double w = -(s.g.n % 2 == 0 ? 1.0 : -1.0) * s.g.Z;
                for (Side sd : {Side::Above, Side::Below}) {
                    auto c = check_connection_formulas({0.5 * d - 1.0, nu()}, CutComplex(w, sd));
                    worst = std::max({worst, c[0], c[1], c[2]});
                }
            }
            r.checks = {{"Gegenbauer connection formulas on sampled Z", worst, sc.tolerance("connection", 1e-9)}};
        } else if (name == "krein") {
            r.checks = {krein_check(sc)};
        }
        return r;
    }
};

// ---------------------------------------------------------------- dispatch

template <class Fn>
auto with_geometry(const Scenario& sc, Fn&& fn)
{
    if (sc.geometry == "line1d") return fn(Line1d(sc));
    if (sc.geometry == "static") return fn(Static(sc));
    if (sc.geometry == "dynamics") return fn(Dynamics(sc));
    if (sc.geometry == "flrw") return fn(Flrw(sc));
    if (sc.geometry == "ds") return fn(DeSitter(sc));
    return fn(AntiDeSitter(sc));
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) invalid("cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) invalid("cannot write output file '" + path + "'");
    f << text;
}

std::string meta_line(const std::string& what, std::uint64_t hash)
{
    return std::string("kgprop ") + version + " " + what + " scenario=" + hex(hash);
}

int cmd_eval(const std::string& scenario_path, const std::string& kind_name, const std::string& out_path,
             std::ostream& out)
{
    Scenario sc = parse_scenario(read_file(scenario_path));
    PK kind;
    try {
        kind = parse_kind(kind_name);
    } catch (const Error& e) {
        invalid(e.what());
    }
    Table t = with_geometry(sc, [&](const auto& g) { return g.eval(kind); });
    write_output(out_path, render(t, meta_line("eval geometry=" + sc.geometry + " kind=" + kind_name, sc.hash)), out);
    return Ok;
}

int cmd_suite(const std::string& scenario_path, const std::string& suite, const std::string& out_path,
              std::ostream& out)
{
    Scenario sc = parse_scenario(read_file(scenario_path));
    if (suite != "identities" && suite != "connection" && suite != "krein" && suite != "specialty")
        invalid("unknown suite '" + suite + "'");
    if (suite == "connection" && sc.geometry != "ds" && sc.geometry != "ads")
        invalid("suite 'connection' needs geometry ds or ads");
    Report rep = with_geometry(sc, [&](const auto& g) { return g.suite(sc, suite); });
    json j;
    j["schema"] = "kgprop.report/1";
    j["version"] = version;
    j["scenario"] = hex(sc.hash);
    j["geometry"] = sc.geometry;
    j["suite"] = suite;
    bool all = true;
    j["checks"] = json::array();
    for (const auto& c : rep.checks) {
        j["checks"].push_back(
            {{"name", c.name}, {"max_residual", c.residual}, {"tolerance", c.tol}, {"pass", c.pass()}});
        all = all && c.pass();
    }
    for (auto it = rep.extra.begin(); it != rep.extra.end(); ++it) j[it.key()] = it.value();
    j["pass"] = all;
    write_output(out_path, j.dump(2) + "\n", out);
    return all ? Ok : Failed;
}

std::vector<double> parse_range(const std::string& spec, const std::string& name)
{
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || !std::isfinite(x)) invalid("--" + name + " expects start:stop:step or a number");
        return x;
    };
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 1) return {num(parts[0])};
    if (parts.size() != 3) invalid("--" + name + " expects start:stop:step or a number");
    const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (!(h > 0.0) || b < a) invalid("--" + name + " needs step > 0 and stop >= start");
    const auto n = std::size_t(std::floor((b - a) / h + 1e-9)) + 1;
    if (n > 100000) invalid("--" + name + " range too long");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + double(i) * h;
    return v;
}

int cmd_scan(const std::string& family, const std::string& mu_spec, const std::string& m_spec, double tol,
             const std::string& out_path, std::ostream& out)
{
    if (family != "scarf" && family != "zero") invalid("unknown family '" + family + "' (scarf or zero)");
    std::vector<double> mus = family == "scarf" ? parse_range(mu_spec, "mu") : std::vector<double>{0.0};
    std::vector<double> ms = parse_range(m_spec, "m");
    for (double mu : mus)
        if (family == "scarf" && !(mu > 0.0)) invalid("Scarf index mu must be positive");
    for (double m : ms)
        if (!(m > 0.0)) invalid("mass m must be positive");
    if (!(tol > 0.0)) invalid("--tol must be positive");
    const std::string key = "scan family=" + family + " mu=" + mu_spec + " m=" + m_spec + " tol=" + std::to_string(tol);
    Table t{{"mu", "m", "abs_B_plus", "abs_B_minus", "special"}, std::vector<std::string>(mus.size() * ms.size())};
    parallel_for(t.rows.size(), [&](std::size_t i) {
        const double mu = mus[i / ms.size()], m = ms[i % ms.size()];
        Potential v = family == "scarf" ? Potential::scarf(mu) : Potential::zero();
        Scattering s = scattering_coefficients(v, m);
        const double bp = std::abs(s.B_plus), bm = std::abs(s.B_minus);
        t.rows[i] = join({fmt(mu), fmt(m), fmt(bp), fmt(bm), std::max(bp, bm) < tol ? "1" : "0"});
    });
    write_output(out_path, render(t, meta_line(key, fnv1a(key))), out);
    return Ok;
}

}  // namespace

int exit_code(ErrorCode c)
{
    switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DomainError:
    case ErrorCode::PreconditionFailed:
    case ErrorCode::StabilityRequired:
    case ErrorCode::ZeroModePresent:
    case ErrorCode::NotJostAdmissible:
    case ErrorCode::ExcludedParameter:
    case ErrorCode::OverlapZero:
    case ErrorCode::OnSpectrum:
        return Validation;
    default:
        return Numerics;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Klein-Gordon propagators: kernel evaluation, identity suites and reflectionless scans", "kgprop"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    std::string scenario, kind = "F", suite = "identities", out_path = "-";
    auto* ev = app.add_subcommand("eval", "evaluate a propagator kernel on the scenario grid (CSV)");
    ev->add_option("--scenario", scenario, "scenario JSON file")->required();
    ev->add_option("--kind", kind, "PJ, Ret, Adv, F, Fbar, Pos, Neg, Sym, SymA, PJA, OpF, OpFbar");
    ev->add_option("--out", out_path, "output path, - for stdout");

    auto* su = app.add_subcommand("suite", "run an identity suite (JSON report)");
    su->add_option("--scenario", scenario, "scenario JSON file")->required();
    su->add_option("--suite", suite, "identities, connection, krein or specialty");
    su->add_option("--out", out_path, "output path, - for stdout");

    std::string family = "scarf", mu = "1", m = "1";
    double tol = 1e-6;
    auto* sc = app.add_subcommand("scan", "reflection coefficients over a potential family (CSV)");
    sc->add_option("--family", family, "scarf or zero");
    sc->add_option("--mu", mu, "Scarf index, start:stop:step or a number");
    sc->add_option("--m", m, "mass, start:stop:step or a number");
    sc->add_option("--tol", tol, "threshold on |B| for the special column");
    sc->add_option("--out", out_path, "output path, - for stdout");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Ok : Validation;
    }

    try {
        if (ev->parsed()) return cmd_eval(scenario, kind, out_path, out);
        if (su->parsed()) return cmd_suite(scenario, suite, out_path, out);
        return cmd_scan(family, mu, m, tol, out_path, out);
    } catch (const ValidationError& e) {
        err << "kgprop: invalid input: " << e.what() << "\n";
        return Validation;
    } catch (const json::exception& e) {
        err << "kgprop: invalid input: " << e.what() << "\n";
        return Validation;
    } catch (const Error& e) {
        err << "kgprop: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "kgprop: numerical failure: " << e.what() << "\n";
        return Numerics;
    }
}

}  // namespace kgp::cli
