#pragma once

namespace sch {
inline constexpr const char* kVersion = "sch 0.1.0";
}
