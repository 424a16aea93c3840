#pragma once

namespace difflab {
inline constexpr const char* kVersionString = "0.1.0";
}
