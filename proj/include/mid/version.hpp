#pragma once

namespace mid {

inline constexpr const char* kToolName = "mid";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace mid
