#pragma once

namespace scqr {

inline constexpr const char* version = "0.1.0";

}  // namespace scqr
