// AVX2 kernel variants. Floating-point kernels follow the same fixed
// reduction order as the scalar table (four interleaved accumulators,
// multiply then add, no FMA contraction) so results stay bit-identical.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "curate/kernels/simd.hpp"

namespace curate::kernels {

namespace {

inline __m256i mullo_epi64(__m256i a, __m256i b) {
    // 64-bit lane-wise multiply from 32x32->64 pieces; AVX2 has no native op.
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i ahi = _mm256_srli_epi64(a, 32);
    const __m256i bhi = _mm256_srli_epi64(b, 32);
    const __m256i cross =
        _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_vec(__m256i x) {
    const __m256i c1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL));
    const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL));
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 30));
    x = mullo_epi64(x, c1);
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 27));
    x = mullo_epi64(x, c2);
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
    return x;
}

inline __m256i min_epu64(__m256i a, __m256i b) {
    // Unsigned compare via sign-bit bias, then select the smaller lane.
    const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
    const __m256i gt = _mm256_cmpgt_epi64(_mm256_xor_si256(a, bias),
                                          _mm256_xor_si256(b, bias));
    return _mm256_blendv_epi8(a, b, gt);
}

void minhash_update_avx2(uint64_t base, const uint64_t* seeds, uint64_t* mins,
                         size_t k) {
    const __m256i vbase = _mm256_set1_epi64x(static_cast<long long>(base));
    size_t i = 0;
    for (; i + 4 <= k; i += 4) {
        const __m256i s =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seeds + i));
        const __m256i h = mix64_vec(_mm256_xor_si256(vbase, s));
        const __m256i m =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mins + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(mins + i), min_epu64(m, h));
    }
    for (; i < k; ++i) {
        uint64_t x = base ^ seeds[i];
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        if (x < mins[i]) mins[i] = x;
    }
}

size_t count_equal_u64_avx2(const uint64_t* a, const uint64_t* b, size_t n) {
    size_t eq = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const int mask =
            _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, vb)));
        eq += static_cast<size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) eq += (a[i] == b[i]) ? 1 : 0;
    return eq;
}

double sparse_dot_avx2(const uint32_t* idx, const double* val, size_t nnz,
                       const double* dense) {
    __m256d vacc = _mm256_setzero_pd();
    const size_t nnz4 = nnz & ~static_cast<size_t>(3);
    for (size_t j = 0; j < nnz4; j += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
        const __m256d g = _mm256_i32gather_pd(dense, vi, 8);
        const __m256d v = _mm256_loadu_pd(val + j);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(v, g));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    double tail = 0.0;
    for (size_t j = nnz4; j < nnz; ++j) tail += val[j] * dense[idx[j]];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

double sum_sq_avx2(const double* x, size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const size_t n4 = n & ~static_cast<size_t>(3);
    for (size_t j = 0; j < n4; j += 4) {
        const __m256d v = _mm256_loadu_pd(x + j);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(v, v));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    double tail = 0.0;
    for (size_t j = n4; j < n; ++j) tail += x[j] * x[j];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

void scale_avx2(double* x, size_t n, double a) {
    const __m256d va = _mm256_set1_pd(a);
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        _mm256_storeu_pd(x + j, _mm256_mul_pd(_mm256_loadu_pd(x + j), va));
    }
    for (; j < n; ++j) x[j] *= a;
}

}  // namespace

const KernelTable kAvx2Table = {
    minhash_update_avx2, count_equal_u64_avx2, sparse_dot_avx2,
    sum_sq_avx2,         scale_avx2,           "avx2",
};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }

}  // namespace curate::kernels

#endif  // x86_64
