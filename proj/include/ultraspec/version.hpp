#pragma once

#define ULTRASPEC_VERSION_MAJOR 1
#define ULTRASPEC_VERSION_MINOR 0
#define ULTRASPEC_VERSION_PATCH 0

namespace ultraspec {

inline constexpr const char* version_string() { return "1.0.0"; }
inline constexpr const char* schema_string() { return "ultraspec/1"; }

}  // namespace ultraspec
