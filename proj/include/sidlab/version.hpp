#pragma once

namespace sidlab {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace sidlab
