#pragma once

namespace specweyl {

inline constexpr const char* kToolName = "spectral-weyl";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace specweyl
