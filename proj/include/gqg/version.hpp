#pragma once

namespace gqg {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

}  // namespace gqg
