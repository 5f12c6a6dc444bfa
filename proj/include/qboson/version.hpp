#pragma once

namespace qboson {

inline constexpr const char* kToolName = "qboson";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace qboson
