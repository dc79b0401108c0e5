#pragma once

namespace gbem {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace gbem
