#pragma once

namespace talab {
inline constexpr const char* kVersion = "1.0.0";
}
