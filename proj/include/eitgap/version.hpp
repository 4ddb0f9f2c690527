#pragma once

#include <string_view>

namespace eitgap {

inline constexpr std::string_view version = "1.0.0";

}  // namespace eitgap
