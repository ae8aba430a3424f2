#pragma once

namespace antsel {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace antsel
