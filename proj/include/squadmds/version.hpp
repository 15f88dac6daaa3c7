#pragma once

namespace squadmds {

inline constexpr const char* kToolName = "squadmds";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace squadmds
