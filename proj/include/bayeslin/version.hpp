#pragma once

namespace bayeslin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bayeslin
