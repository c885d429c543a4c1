#pragma once

namespace nll {

inline constexpr const char* kVersion = "nll 1.0.0";

}  // namespace nll
