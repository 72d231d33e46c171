#pragma once

namespace relatom {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace relatom
