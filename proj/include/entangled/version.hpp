#pragma once

namespace entangled {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace entangled
