#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace curate::kernels {

// Hot inner loops used by dedup and the quality classifier. Each kernel has
// a scalar reference implementation plus optional vector variants; all
// variants must produce bit-identical results so callers never care which
// one was selected.
struct KernelTable {
    // For each slot i: mins[i] = min(mins[i], mix64(base ^ seeds[i])).
    void (*minhash_update)(uint64_t base, const uint64_t* seeds, uint64_t* mins,
                           size_t k);

    // Number of positions where a[i] == b[i].
    size_t (*count_equal_u64)(const uint64_t* a, const uint64_t* b, size_t n);

    // Sum of val[j] * dense[idx[j]] over nnz entries.
    double (*sparse_dot)(const uint32_t* idx, const double* val, size_t nnz,
                         const double* dense);

    // Sum of x[j]^2 over n entries.
    double (*sum_sq)(const double* x, size_t n);

    // x[j] *= a for n entries.
    void (*scale)(double* x, size_t n, double a);

    // Implementation label: "scalar", "avx2" or "neon".
    const char* name;
};

// Selected-at-startup table. Honors the CURATE_SIMD environment variable
// ("scalar", "avx2", "neon", "auto"); unavailable or unknown values fall
// back to the best supported variant.
const KernelTable& active();

// Named table lookup for tests; returns nullptr when the variant was not
// compiled in or the CPU lacks support.
const KernelTable* by_name(const std::string& name);

extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
bool cpu_has_avx2();
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif

}  // namespace curate::kernels
