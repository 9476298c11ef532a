#pragma once

namespace tpc {

inline constexpr const char* kToolName = "tpc";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace tpc
