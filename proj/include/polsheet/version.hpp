#pragma once

namespace polsheet {

inline constexpr const char* version = "0.1.0";

} // namespace polsheet
