// NEON kernel variants for aarch64. NEON lacks a 64-bit lane multiply, so
// the MinHash update stays scalar here; the remaining kernels vectorize with
// the same fixed reduction order as the scalar table.
#if defined(__aarch64__)

#include <arm_neon.h>

#include "curate/hash.hpp"
#include "curate/kernels/simd.hpp"

namespace curate::kernels {

namespace {

void minhash_update_neon(uint64_t base, const uint64_t* seeds, uint64_t* mins,
                         size_t k) {
    for (size_t i = 0; i < k; ++i) {
        const uint64_t h = mix64(base ^ seeds[i]);
        if (h < mins[i]) mins[i] = h;
    }
}

size_t count_equal_u64_neon(const uint64_t* a, const uint64_t* b, size_t n) {
    size_t eq = 0;
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t m = vceqq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
        eq += (vgetq_lane_u64(m, 0) ? 1u : 0u) + (vgetq_lane_u64(m, 1) ? 1u : 0u);
    }
    for (; i < n; ++i) eq += (a[i] == b[i]) ? 1 : 0;
    return eq;
}

double sparse_dot_neon(const uint32_t* idx, const double* val, size_t nnz,
                       const double* dense) {
    float64x2_t vacc01 = vdupq_n_f64(0.0);
    float64x2_t vacc23 = vdupq_n_f64(0.0);
    const size_t nnz4 = nnz & ~static_cast<size_t>(3);
    for (size_t j = 0; j < nnz4; j += 4) {
        double g01[2] = {dense[idx[j]], dense[idx[j + 1]]};
        double g23[2] = {dense[idx[j + 2]], dense[idx[j + 3]]};
        vacc01 = vaddq_f64(vacc01, vmulq_f64(vld1q_f64(val + j), vld1q_f64(g01)));
        vacc23 = vaddq_f64(vacc23, vmulq_f64(vld1q_f64(val + j + 2), vld1q_f64(g23)));
    }
    const double a0 = vgetq_lane_f64(vacc01, 0);
    const double a1 = vgetq_lane_f64(vacc01, 1);
    const double a2 = vgetq_lane_f64(vacc23, 0);
    const double a3 = vgetq_lane_f64(vacc23, 1);
    double tail = 0.0;
    for (size_t j = nnz4; j < nnz; ++j) tail += val[j] * dense[idx[j]];
    return ((a0 + a1) + (a2 + a3)) + tail;
}

double sum_sq_neon(const double* x, size_t n) {
    float64x2_t vacc01 = vdupq_n_f64(0.0);
    float64x2_t vacc23 = vdupq_n_f64(0.0);
    const size_t n4 = n & ~static_cast<size_t>(3);
    for (size_t j = 0; j < n4; j += 4) {
        const float64x2_t v01 = vld1q_f64(x + j);
        const float64x2_t v23 = vld1q_f64(x + j + 2);
        vacc01 = vaddq_f64(vacc01, vmulq_f64(v01, v01));
        vacc23 = vaddq_f64(vacc23, vmulq_f64(v23, v23));
    }
    const double a0 = vgetq_lane_f64(vacc01, 0);
    const double a1 = vgetq_lane_f64(vacc01, 1);
    const double a2 = vgetq_lane_f64(vacc23, 0);
    const double a3 = vgetq_lane_f64(vacc23, 1);
    double tail = 0.0;
    for (size_t j = n4; j < n; ++j) tail += x[j] * x[j];
    return ((a0 + a1) + (a2 + a3)) + tail;
}

void scale_neon(double* x, size_t n, double a) {
    const float64x2_t va = vdupq_n_f64(a);
    size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        vst1q_f64(x + j, vmulq_f64(vld1q_f64(x + j), va));
    }
    for (; j < n; ++j) x[j] *= a;
}

}  // namespace

const KernelTable kNeonTable = {
    minhash_update_neon, count_equal_u64_neon, sparse_dot_neon,
    sum_sq_neon,         scale_neon,           "neon",
};

}  // namespace curate::kernels

#endif  // __aarch64__
