#include "kgprop/core.hpp"

#include <array>
#include <utility>

namespace kgp {

int side_sign(const CutComplex& z)
{
    if (z.value.imag() > 0.0) return 1;
    if (z.value.imag() < 0.0) return -1;
    switch (z.side) {
    case Side::Above: return 1;
    case Side::Below: return -1;
    default: return 0;
    }
}

Side flip(Side s)
{
    if (s == Side::Above) return Side::Below;
    if (s == Side::Below) return Side::Above;
    return Side::Off;
}

const char* to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::DecayTooSlow: return "DecayTooSlow";
    case ErrorCode::InconsistentWronskian: return "InconsistentWronskian";
    case ErrorCode::BoundStateHit: return "BoundStateHit";
    case ErrorCode::IllConditionedMatch: return "IllConditionedMatch";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::NotComplementary: return "NotComplementary";
    case ErrorCode::OnePlusKSingular: return "OnePlusKSingular";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::StabilityRequired: return "StabilityRequired";
    case ErrorCode::ZeroModePresent: return "ZeroModePresent";
    case ErrorCode::NotJostAdmissible: return "NotJostAdmissible";
    case ErrorCode::OnLightCone: return "OnLightCone";
    case ErrorCode::ExcludedParameter: return "ExcludedParameter";
    case ErrorCode::OnSpectrum: return "OnSpectrum";
    case ErrorCode::OverlapZero: return "OverlapZero";
    case ErrorCode::ChartBoundary: return "ChartBoundary";
    case ErrorCode::NullSeparated: return "NullSeparated";
    }
    return "Unknown";
}

namespace {
constexpr std::array<std::pair<PropagatorKind, const char*>, 12> kind_names{{
    {PropagatorKind::PJ, "PJ"},
    {PropagatorKind::Ret, "Ret"},
    {PropagatorKind::Adv, "Adv"},
    {PropagatorKind::F, "F"},
    {PropagatorKind::Fbar, "Fbar"},
    {PropagatorKind::Pos, "Pos"},
    {PropagatorKind::Neg, "Neg"},
    {PropagatorKind::Sym, "Sym"},
    {PropagatorKind::SymA, "SymA"},
    {PropagatorKind::PJA, "PJA"},
    {PropagatorKind::OpF, "OpF"},
    {PropagatorKind::OpFbar, "OpFbar"},
}};
}

const char* to_string(PropagatorKind k)
{
    for (auto& [kind, name] : kind_names)
        if (kind == k) return name;
    return "?";
}

PropagatorKind parse_kind(std::string_view name)
{
    for (auto& [kind, n] : kind_names)
        if (name == n) return kind;
    throw Error(ErrorCode::InvalidArgument, "unknown propagator kind '" + std::string(name) + "'");
}

}  // namespace kgp
