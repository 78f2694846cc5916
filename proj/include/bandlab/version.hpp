#pragma once

namespace bandlab {

inline constexpr const char* version = "0.1.0";

}  // namespace bandlab
