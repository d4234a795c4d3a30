#pragma once

namespace curate {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace curate
