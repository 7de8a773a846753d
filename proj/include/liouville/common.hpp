#pragma once
// Shared aliases and small helpers used across the library.

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace liouville {

using u8  = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i8  = std::int8_t;
using i32 = std::int32_t;
using i64 = std::int64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Precondition violations (bad arguments, budget breaches) surface as
// std::invalid_argument; the CLI maps them to exit code 2. I/O and other
// runtime failures stay std::runtime_error and map to exit code 1.
[[noreturn]] inline void fail_arg(const std::string& msg) {
    throw std::invalid_argument(msg);
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// Ceiling/floor division for positive operands.
inline u64 ceil_div(u64 a, u64 b) { return a / b + (a % b != 0); }

} // namespace liouville
