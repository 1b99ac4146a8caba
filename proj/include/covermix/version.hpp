#pragma once

namespace covermix {
inline constexpr const char* kVersion = "0.1.0";
}
