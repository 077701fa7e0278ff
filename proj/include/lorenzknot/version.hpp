#pragma once

namespace lorenzknot {

inline constexpr const char* kToolVersion = "lorenzknot 0.1.0";

}  // namespace lorenzknot
