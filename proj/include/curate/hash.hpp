#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace curate {

// splitmix64 finalizer. Full 64-bit avalanche, used both as a standalone
// mixer and as the per-slot hash family in MinHash signatures.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// splitmix64 stream: advances the state and returns the next value.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
}

namespace detail {

inline uint64_t load64(const char* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
    return v;
}

inline uint32_t load32(const char* p) {
    uint32_t v;
    std::memcpy(&v, p, 4);
    return v;
}

inline uint64_t rotl64(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

}  // namespace detail

// Seeded one-shot 64-bit hash over bytes (xxHash64 round structure).
// Deterministic across platforms; little-endian loads assumed.
inline uint64_t hash64(const void* data, size_t len, uint64_t seed = 0) {
    constexpr uint64_t P1 = 0x9E3779B185EBCA87ULL;
    constexpr uint64_t P2 = 0xC2B2AE3D27D4EB4FULL;
    constexpr uint64_t P3 = 0x165667B19E3779F9ULL;
    constexpr uint64_t P4 = 0x85EBCA77C2B2AE63ULL;
    constexpr uint64_t P5 = 0x27D4EB2F165667C5ULL;

    const char* p = static_cast<const char*>(data);
    const char* const end = p + len;
    uint64_t h;

    if (len >= 32) {
        uint64_t v1 = seed + P1 + P2;
        uint64_t v2 = seed + P2;
        uint64_t v3 = seed;
        uint64_t v4 = seed - P1;
        do {
            v1 = detail::rotl64(v1 + detail::load64(p) * P2, 31) * P1;
            v2 = detail::rotl64(v2 + detail::load64(p + 8) * P2, 31) * P1;
            v3 = detail::rotl64(v3 + detail::load64(p + 16) * P2, 31) * P1;
            v4 = detail::rotl64(v4 + detail::load64(p + 24) * P2, 31) * P1;
            p += 32;
        } while (p + 32 <= end);
        h = detail::rotl64(v1, 1) + detail::rotl64(v2, 7) + detail::rotl64(v3, 12) +
            detail::rotl64(v4, 18);
        for (uint64_t v : {v1, v2, v3, v4}) {
            h ^= detail::rotl64(v * P2, 31) * P1;
            h = h * P1 + P4;
        }
    } else {
        h = seed + P5;
    }

    h += static_cast<uint64_t>(len);
    while (p + 8 <= end) {
        h ^= detail::rotl64(detail::load64(p) * P2, 31) * P1;
        h = detail::rotl64(h, 27) * P1 + P4;
        p += 8;
    }
    if (p + 4 <= end) {
        h ^= static_cast<uint64_t>(detail::load32(p)) * P1;
        h = detail::rotl64(h, 23) * P2 + P3;
        p += 4;
    }
    while (p < end) {
        h ^= static_cast<uint64_t>(static_cast<unsigned char>(*p)) * P5;
        h = detail::rotl64(h, 11) * P1;
        ++p;
    }
    h ^= h >> 33;
    h *= P2;
    h ^= h >> 29;
    h *= P3;
    h ^= h >> 32;
    return h;
}

inline uint64_t hash64(std::string_view s, uint64_t seed = 0) {
    return hash64(s.data(), s.size(), seed);
}

// Exact match for string literals; without it hash64("x", 7) would resolve
// to the raw-bytes overload with 7 as the length.
inline uint64_t hash64(const char* s, uint64_t seed = 0) {
    return hash64(std::string_view(s), seed);
}

inline std::string to_hex(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace curate
