#pragma once

namespace kms {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace kms
