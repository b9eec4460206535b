#pragma once

namespace hpdiv {
inline constexpr const char* kVersion = "0.1.0";
}
