#include "curate/hash.hpp"
#include "curate/kernels/simd.hpp"

namespace curate::kernels {

namespace {

void minhash_update_scalar(uint64_t base, const uint64_t* seeds, uint64_t* mins,
                           size_t k) {
    for (size_t i = 0; i < k; ++i) {
        const uint64_t h = mix64(base ^ seeds[i]);
        if (h < mins[i]) mins[i] = h;
    }
}

size_t count_equal_u64_scalar(const uint64_t* a, const uint64_t* b, size_t n) {
    size_t eq = 0;
    for (size_t i = 0; i < n; ++i) eq += (a[i] == b[i]) ? 1 : 0;
    return eq;
}

// Floating-point reductions use four interleaved accumulators combined in a
// fixed order. Vector variants follow the same order, so every table yields
// bit-identical sums.
double sparse_dot_scalar(const uint32_t* idx, const double* val, size_t nnz,
                         const double* dense) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const size_t nnz4 = nnz & ~static_cast<size_t>(3);
    for (size_t j = 0; j < nnz4; j += 4) {
        acc[0] += val[j] * dense[idx[j]];
        acc[1] += val[j + 1] * dense[idx[j + 1]];
        acc[2] += val[j + 2] * dense[idx[j + 2]];
        acc[3] += val[j + 3] * dense[idx[j + 3]];
    }
    double tail = 0.0;
    for (size_t j = nnz4; j < nnz; ++j) tail += val[j] * dense[idx[j]];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

double sum_sq_scalar(const double* x, size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const size_t n4 = n & ~static_cast<size_t>(3);
    for (size_t j = 0; j < n4; j += 4) {
        acc[0] += x[j] * x[j];
        acc[1] += x[j + 1] * x[j + 1];
        acc[2] += x[j + 2] * x[j + 2];
        acc[3] += x[j + 3] * x[j + 3];
    }
    double tail = 0.0;
    for (size_t j = n4; j < n; ++j) tail += x[j] * x[j];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

void scale_scalar(double* x, size_t n, double a) {
    for (size_t j = 0; j < n; ++j) x[j] *= a;
}

}  // namespace

const KernelTable kScalarTable = {
    minhash_update_scalar, count_equal_u64_scalar, sparse_dot_scalar,
    sum_sq_scalar,         scale_scalar,           "scalar",
};

}  // namespace curate::kernels
