#pragma once

namespace monfermi {
inline constexpr const char* kVersion = "0.1.0";
}
