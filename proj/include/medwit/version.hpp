#pragma once

namespace medwit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace medwit
