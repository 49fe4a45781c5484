#pragma once

#include <string_view>

namespace davlab {

// Engine version. Cached results are keyed by this string; bump it whenever a
// change could alter any computed value.
inline constexpr std::string_view kEngineVersion = "1.0.0";

}  // namespace davlab
