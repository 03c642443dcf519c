#pragma once

namespace ww {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ww
