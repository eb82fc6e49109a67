#pragma once

namespace qvolterra {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qvolterra
