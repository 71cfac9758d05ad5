#pragma once

namespace timersel {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace timersel
