#pragma once

namespace corrtree {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace corrtree
