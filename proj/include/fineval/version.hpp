#pragma once

#define FINEVAL_VERSION_MAJOR 0
#define FINEVAL_VERSION_MINOR 1
#define FINEVAL_VERSION_PATCH 0

namespace fineval {
inline constexpr const char* version = "0.1.0";
}
