#pragma once

namespace kgfv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kgfv
