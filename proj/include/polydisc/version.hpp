#pragma once

namespace polydisc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polydisc
