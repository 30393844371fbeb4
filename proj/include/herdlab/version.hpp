#pragma once

namespace herdlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace herdlab
