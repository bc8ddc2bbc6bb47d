#pragma once

namespace routerq {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "routerq";

}  // namespace routerq
