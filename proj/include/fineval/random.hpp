#pragma once

#include <cstdint>
#include <string_view>

#include "fineval/csv.hpp"

namespace fineval {

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for a named random stream. Streams depend only on the top-level
/// seed and their own name, never on which other streams exist.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) noexcept
{
    return mix64(seed ^ csv::fnv1a(stream));
}

} // namespace fineval
