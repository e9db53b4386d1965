#pragma once

namespace ndsg {
inline constexpr const char* version = "0.1.0";
}
