#pragma once

#include <string_view>

namespace analogy {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kToolName = "analogy-audit";

}  // namespace analogy
