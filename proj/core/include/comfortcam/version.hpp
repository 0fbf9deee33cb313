#pragma once

namespace comfortcam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace comfortcam
