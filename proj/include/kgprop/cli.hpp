#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kgprop/core.hpp"

namespace kgp::cli {

inline constexpr const char* version = "0.1.0";
inline constexpr const char* scenario_schema = "kgprop.scenario/1";

enum Exit : int { Ok = 0, Failed = 1, Validation = 2, Numerics = 3 };

// Precondition-type library errors map to Validation, the rest to Numerics.
int exit_code(ErrorCode c);

std::uint64_t fnv1a(std::string_view bytes);

// args excludes the program name; "-" as output path writes to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgp::cli
