#pragma once

#define NETDENS_VERSION_MAJOR 0
#define NETDENS_VERSION_MINOR 1
#define NETDENS_VERSION_PATCH 0
#define NETDENS_VERSION_STRING "0.1.0"

namespace netdens {

inline constexpr const char* version() { return NETDENS_VERSION_STRING; }

}  // namespace netdens
