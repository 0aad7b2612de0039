#pragma once

namespace fsbe {

inline constexpr const char* version_string = "fsbe 0.1.0";

}  // namespace fsbe
