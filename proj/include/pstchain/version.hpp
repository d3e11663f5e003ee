#pragma once

namespace pstchain {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pstchain
