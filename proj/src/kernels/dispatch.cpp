#include <cstdlib>
#include <string>

#include "curate/kernels/simd.hpp"

namespace curate::kernels {

namespace {

const KernelTable* best_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &kAvx2Table;
#elif defined(__aarch64__)
    return &kNeonTable;
#endif
    return &kScalarTable;
}

const KernelTable* select() {
    const char* env = std::getenv("CURATE_SIMD");
    if (env != nullptr && *env != '\0' && std::string(env) != "auto") {
        if (const KernelTable* t = by_name(env)) return t;
    }
    return best_supported();
}

}  // namespace

const KernelTable* by_name(const std::string& name) {
    if (name == "scalar") return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && cpu_has_avx2()) return &kAvx2Table;
#endif
#if defined(__aarch64__)
    if (name == "neon") return &kNeonTable;
#endif
    return nullptr;
}

const KernelTable& active() {
    static const KernelTable* table = select();
    return *table;
}

}  // namespace curate::kernels
