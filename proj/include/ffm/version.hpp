#pragma once

namespace ffm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ffm
