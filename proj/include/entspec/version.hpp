#pragma once

namespace entspec {

inline constexpr const char* kToolName = "entspec";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace entspec
