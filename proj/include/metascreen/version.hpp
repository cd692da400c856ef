#pragma once

namespace metascreen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace metascreen
