#include "spinchaos/kernels.hpp"

#include <cstdlib>
#include <string>

namespace spinchaos::kernels {

#if defined(SPINCHAOS_HAS_AVX2)
const KernelTable& avx2_kernels();
#endif

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_table() {
#if defined(SPINCHAOS_HAS_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("SPINCHAOS_ISA");
        if (env != nullptr && std::string(env) == "scalar") return &scalar_table();
        if (const KernelTable* t = avx2_table()) return t;
        return &scalar_table();
    }();
    return *chosen;
}

}  // namespace spinchaos::kernels
