// Runtime kernel selection: AVX2+FMA when the CPU has it, scalar otherwise.
// LIOUVILLE_LAB_SIMD=scalar|avx2|auto overrides (checked once, at first use);
// force_dispatch() overrides explicitly (tests, --simd flag).

#include <cstdlib>
#include <cstring>
#include <string>

#include "liouville/kernels.hpp"

namespace liouville::kernels {

bool avx2_available() {
#if defined(__x86_64__) && defined(LIOUVILLE_ENABLE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

#if !(defined(__x86_64__) && defined(LIOUVILLE_ENABLE_AVX2))
const Ops& avx2_ops() {
    fail_arg("avx2 kernels not compiled into this binary");
}
#endif

namespace {

const Ops* select(const char* name) {
    if (std::strcmp(name, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(name, "avx2") == 0) {
        if (!avx2_available()) fail_arg("avx2 kernels unavailable on this CPU/build");
        return &avx2_ops();
    }
    if (std::strcmp(name, "auto") == 0)
        return avx2_available() ? &avx2_ops() : &scalar_ops();
    fail_arg(std::string("unknown simd dispatch name: ") + name);
}

const Ops* g_forced = nullptr;

} // namespace

void force_dispatch(const char* name) { g_forced = select(name); }

const Ops& ops() {
    if (g_forced) return *g_forced;
    static const Ops* chosen = [] {
        const char* env = std::getenv("LIOUVILLE_LAB_SIMD");
        return select(env && *env ? env : "auto");
    }();
    return *chosen;
}

} // namespace liouville::kernels
