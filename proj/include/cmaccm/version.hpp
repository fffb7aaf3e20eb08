#pragma once

namespace cmaccm {

inline constexpr const char* kToolName = "cmaccm";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cmaccm
