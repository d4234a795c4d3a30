#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "curate/hash.hpp"
#include "curate/kernels/simd.hpp"

using namespace curate;

namespace {

std::vector<const kernels::KernelTable*> available_tables() {
    std::vector<const kernels::KernelTable*> tables = {&kernels::kScalarTable};
    for (const char* name : {"avx2", "neon"}) {
        if (const kernels::KernelTable* t = kernels::by_name(name)) {
            tables.push_back(t);
        }
    }
    return tables;
}

}  // namespace

TEST_CASE("scalar minhash_update computes elementwise mins") {
    const std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<uint64_t> mins(5, UINT64_MAX);
    kernels::kScalarTable.minhash_update(42, seeds.data(), mins.data(), 5);
    for (size_t i = 0; i < 5; ++i) CHECK(mins[i] == mix64(42 ^ seeds[i]));

    // A second base only lowers slots where its mix is smaller.
    std::vector<uint64_t> prev = mins;
    kernels::kScalarTable.minhash_update(7, seeds.data(), mins.data(), 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(mins[i] == std::min(prev[i], mix64(7 ^ seeds[i])));
    }
}

TEST_CASE("scalar count_equal_u64 counts matching positions") {
    const std::vector<uint64_t> a = {1, 2, 3, 4, 5, 6, 7};
    const std::vector<uint64_t> b = {1, 0, 3, 0, 5, 0, 7};
    CHECK(kernels::kScalarTable.count_equal_u64(a.data(), b.data(), 7) == 4);
    CHECK(kernels::kScalarTable.count_equal_u64(a.data(), b.data(), 0) == 0);
    CHECK(kernels::kScalarTable.count_equal_u64(a.data(), a.data(), 7) == 7);
}

TEST_CASE("scalar sparse_dot and sum_sq match a plain loop") {
    const std::vector<uint32_t> idx = {0, 3, 9};
    const std::vector<double> val = {0.5, -2.0, 4.0};
    std::vector<double> dense(10, 0.0);
    dense[0] = 2.0;
    dense[3] = 1.5;
    dense[9] = -0.25;
    CHECK(kernels::kScalarTable.sparse_dot(idx.data(), val.data(), 3,
                                           dense.data()) ==
          doctest::Approx(0.5 * 2.0 + -2.0 * 1.5 + 4.0 * -0.25));
    CHECK(kernels::kScalarTable.sum_sq(val.data(), 3) ==
          doctest::Approx(0.25 + 4.0 + 16.0));
}

TEST_CASE("all compiled variants are bit-identical to scalar") {
    const auto tables = available_tables();
    INFO("variants available: " << tables.size());
    std::mt19937_64 rng(20240615);

    // Every remainder class around the vector widths matters.
    for (size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 100, 257}) {
        std::vector<uint64_t> seeds(n);
        std::vector<uint64_t> au(n);
        std::vector<uint64_t> bu(n);
        std::vector<uint32_t> idx(n);
        std::vector<double> val(n);
        std::vector<double> x(n);
        std::vector<double> dense(1024);
        for (double& d : dense) {
            d = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        }
        for (size_t i = 0; i < n; ++i) {
            seeds[i] = rng();
            au[i] = rng() % 4;
            bu[i] = rng() % 4;
            idx[i] = static_cast<uint32_t>(rng() % dense.size());
            val[i] = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
            x[i] = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        }
        const uint64_t base = rng();

        std::vector<uint64_t> prefill(n, UINT64_MAX);
        for (size_t i = 0; i + 1 < n; i += 2) prefill[i] = rng();
        std::vector<uint64_t> mins_ref = prefill;
        kernels::kScalarTable.minhash_update(base, seeds.data(), mins_ref.data(), n);
        const size_t eq_ref =
            kernels::kScalarTable.count_equal_u64(au.data(), bu.data(), n);
        const double dot_ref =
            kernels::kScalarTable.sparse_dot(idx.data(), val.data(), n, dense.data());
        const double sq_ref = kernels::kScalarTable.sum_sq(x.data(), n);
        std::vector<double> scaled_ref = x;
        kernels::kScalarTable.scale(scaled_ref.data(), n, 1.0 / 3.0);

        for (const kernels::KernelTable* t : tables) {
            CAPTURE(t->name);
            CAPTURE(n);
            std::vector<uint64_t> mins = prefill;
            t->minhash_update(base, seeds.data(), mins.data(), n);
            CHECK(mins == mins_ref);

            CHECK(t->count_equal_u64(au.data(), bu.data(), n) == eq_ref);
            const double dot = t->sparse_dot(idx.data(), val.data(), n, dense.data());
            CHECK(dot == dot_ref);
            const double sq = t->sum_sq(x.data(), n);
            CHECK(sq == sq_ref);
            std::vector<double> scaled = x;
            t->scale(scaled.data(), n, 1.0 / 3.0);
            CHECK(scaled == scaled_ref);
        }
    }
}

TEST_CASE("by_name resolves scalar and rejects unknown names") {
    CHECK(kernels::by_name("scalar") == &kernels::kScalarTable);
    CHECK(kernels::by_name("sse9000") == nullptr);
    CHECK(kernels::by_name("") == nullptr);
}

TEST_CASE("active table is one of the compiled variants") {
    const kernels::KernelTable& t = kernels::active();
    const std::string name = t.name;
    CHECK((name == "scalar" || name == "avx2" || name == "neon"));
    CHECK(kernels::by_name(name) == &t);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 table is gated on cpu support") {
    if (kernels::cpu_has_avx2()) {
        CHECK(kernels::by_name("avx2") == &kernels::kAvx2Table);
    } else {
        CHECK(kernels::by_name("avx2") == nullptr);
    }
}
#endif
