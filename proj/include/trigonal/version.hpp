#pragma once

#ifndef TRIGONAL_VERSION
#define TRIGONAL_VERSION "0.0.0"
#endif

namespace trigonal {

inline const char* version() { return TRIGONAL_VERSION; }

}  // namespace trigonal
