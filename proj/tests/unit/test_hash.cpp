#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "curate/hash.hpp"

using namespace curate;

namespace {

std::string from_hex(const std::string& hex) {
    std::string out;
    for (size_t i = 0; i + 1 < hex.size(); i += 2) {
        out.push_back(static_cast<char>(
            std::stoi(hex.substr(i, 2), nullptr, 16)));
    }
    return out;
}

std::string counting_bytes(size_t n) {
    std::string out;
    for (size_t i = 0; i < n; ++i) out.push_back(static_cast<char>(i));
    return out;
}

// 200 bytes drawn once from a seeded generator and frozen.
const char* kBlobHex =
    "f05d9b66d1877dffb5d46f9ea92669ef4b6cd21db2d5ee3f47a7c7a9b066a6dad4a26dd0"
    "756814730984a3d739a97678edbb4567bcfc4886c6acabee5643a969213258024de078b3"
    "752964917aec86f6dfd466249a9a8e458033fd6f64c65a72a3b517c1253c751c406b2c58"
    "78f954522c40350f375ca1003e8f0e5d1f356b6a61ec5ff2a08be8e06fcce5d6446b529f"
    "cb645bb6e9073dab0172d6136dedfe19dcaa05ae82507337dc2244590cad9d81fd52b9ee"
    "defba751133e3dbad95c301bdf0d8b763ca2466c";

}  // namespace

TEST_CASE("hash64 matches frozen reference vectors") {
    CHECK(hash64("", 0) == 0xEF46DB3751D8E999ULL);
    CHECK(hash64("", 1) == 0xD5AFBA1336A3BE4BULL);
    CHECK(hash64("", 0x9E3779B97F4A7C15ULL) == 0xC4349FC93C010000ULL);
    CHECK(hash64("a", 0) == 0xD24EC4F1A98C6E5BULL);
    CHECK(hash64("abc", 0) == 0x44BC2CF5AD770999ULL);
    CHECK(hash64("abc", 42) == 0x13C1D910702770E6ULL);
    CHECK(hash64("hello world", 0) == 0x45AB6734B21E6968ULL);

    // every tail-length branch: 4-byte, 8-byte, 4+stragglers, exact 16
    CHECK(hash64("0123", 7) == 0x79AB1D9B66E86BE8ULL);
    CHECK(hash64("01234567", 7) == 0x542259D169C60B7FULL);
    CHECK(hash64("0123456789abcde", 7) == 0xE00FADD324E2B2AAULL);
    CHECK(hash64("0123456789abcdef", 7) == 0x8FBF8ACB214D5DA5ULL);

    // around the 32-byte stripe boundary
    CHECK(hash64(counting_bytes(31), 1234567) == 0x1B99D993DD403394ULL);
    CHECK(hash64(counting_bytes(32), 1234567) == 0xC619D14C2E877FC9ULL);
    CHECK(hash64(counting_bytes(33), 1234567) == 0x137A55C19D39BEE5ULL);
    CHECK(hash64(counting_bytes(63), 99) == 0xB9F834AA089B4303ULL);
    CHECK(hash64(counting_bytes(64), 99) == 0x3C961B66765CACA6ULL);
    CHECK(hash64(counting_bytes(65), 99) == 0x5E22A8C3ECA75C91ULL);

    const std::string blob = from_hex(kBlobHex);
    REQUIRE(blob.size() == 200);
    CHECK(hash64(blob.data(), blob.size(), 0xDEADBEEFULL) == 0x68030EAC95EA1AB4ULL);
    CHECK(hash64(blob.data(), 97, 31) == 0x20BA99B4412DB965ULL);
}

TEST_CASE("hash64 overloads agree for literals and views") {
    const std::string s = "abc";
    CHECK(hash64("abc", 42) == hash64(std::string_view(s), 42));
    CHECK(hash64("abc", 42) == hash64(s.data(), s.size(), 42));
    CHECK(hash64("abc") == hash64("abc", 0));
}

TEST_CASE("mix64 matches frozen reference vectors") {
    CHECK(mix64(0) == 0);
    CHECK(mix64(1) == 0x5692161D100B05E5ULL);
    CHECK(mix64(0x0123456789ABCDEFULL) == 0xB2C058E4EBB5112CULL);
    CHECK(mix64(0xFFFFFFFFFFFFFFFFULL) == 0xB4D055FCF2CBBD7BULL);
}

TEST_CASE("splitmix64 stream matches published sequence") {
    uint64_t state = 0;
    const std::vector<uint64_t> expect = {
        0xE220A8397B1DCDAFULL, 0x6E789E6AA1B965F4ULL, 0x06C45D188009454FULL,
        0xF88BB8A8724C81ECULL, 0x1B39896A51A8749BULL, 0x53CB9F0C747EA2EAULL,
    };
    for (uint64_t want : expect) CHECK(splitmix64(state) == want);
}

TEST_CASE("to_hex pads to sixteen lowercase digits") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xDEADBEEFULL) == "00000000deadbeef");
    CHECK(to_hex(0x0123456789ABCDEFULL) == "0123456789abcdef");
    CHECK(to_hex(0xFFFFFFFFFFFFFFFFULL) == "ffffffffffffffff");
}
