#pragma once

namespace urtu {

inline constexpr const char* kToolVersion = "urtu 0.1.0";

}  // namespace urtu
