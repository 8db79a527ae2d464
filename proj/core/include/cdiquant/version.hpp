#pragma once

namespace cdiquant {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cdiquant
