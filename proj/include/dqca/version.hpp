#pragma once

namespace dqca {

inline constexpr const char* version = "1.0.0";

} // namespace dqca
