#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgp {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Branch-side tag for real arguments lying on a cut.
enum class Side { Off, Above, Below };

struct CutComplex {
    cplx value{};
    Side side = Side::Off;

    CutComplex() = default;
    CutComplex(cplx v, Side s = Side::Off) : value(v), side(v.imag() != 0.0 ? Side::Off : s) {}
    CutComplex(double x, Side s = Side::Off) : value(x, 0.0), side(s) {}

    double re() const { return value.real(); }
    double im() const { return value.imag(); }
    bool on_real_axis() const { return value.imag() == 0.0; }
};

// +1 above, -1 below, 0 off; for off-axis values the sign of the imaginary part.
int side_sign(const CutComplex& z);
Side flip(Side s);

enum class ErrorCode {
    InvalidArgument,
    DomainError,
    NonConvergent,
    DegenerateParams,
    SolverDiverged,
    DecayTooSlow,
    InconsistentWronskian,
    BoundStateHit,
    IllConditionedMatch,
    NotInvolution,
    NotComplementary,
    OnePlusKSingular,
    PreconditionFailed,
    StabilityRequired,
    ZeroModePresent,
    NotJostAdmissible,
    OnLightCone,
    ExcludedParameter,
    OnSpectrum,
    OverlapZero,
    ChartBoundary,
    NullSeparated,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class PropagatorKind { PJ, Ret, Adv, F, Fbar, Pos, Neg, Sym, SymA, PJA, OpF, OpFbar };

const char* to_string(PropagatorKind k);
PropagatorKind parse_kind(std::string_view name);

inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }
inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace kgp
