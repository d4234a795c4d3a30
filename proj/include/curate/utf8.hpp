#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curate::utf8 {

inline constexpr uint32_t kReplacementChar = 0xFFFD;

// Decodes one scalar value starting at s[pos]. Advances pos past the
// sequence; malformed input consumes one byte and yields U+FFFD.
inline uint32_t decode(std::string_view s, size_t& pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }

    auto cont = [&s](size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    auto bits = [&s](size_t i) {
        return static_cast<uint32_t>(static_cast<unsigned char>(s[i]) & 0x3F);
    };

    if ((b0 & 0xE0) == 0xC0) {
        if (cont(pos + 1)) {
            uint32_t cp = (static_cast<uint32_t>(b0 & 0x1F) << 6) | bits(pos + 1);
            pos += 2;
            return cp >= 0x80 ? cp : kReplacementChar;
        }
    } else if ((b0 & 0xF0) == 0xE0) {
        if (cont(pos + 1) && cont(pos + 2)) {
            uint32_t cp = (static_cast<uint32_t>(b0 & 0x0F) << 12) |
                          (bits(pos + 1) << 6) | bits(pos + 2);
            pos += 3;
            if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return kReplacementChar;
            return cp;
        }
    } else if ((b0 & 0xF8) == 0xF0) {
        if (cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
            uint32_t cp = (static_cast<uint32_t>(b0 & 0x07) << 18) |
                          (bits(pos + 1) << 12) | (bits(pos + 2) << 6) | bits(pos + 3);
            pos += 4;
            return (cp >= 0x10000 && cp <= 0x10FFFF) ? cp : kReplacementChar;
        }
    }
    ++pos;
    return kReplacementChar;
}

// Appends the UTF-8 encoding of cp to out.
inline void append(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Strict well-formedness check: rejects truncated sequences, overlong
// encodings, surrogates, and values past U+10FFFF. A genuine encoded
// U+FFFD is fine.
inline bool valid(std::string_view s) {
    size_t pos = 0;
    while (pos < s.size()) {
        const size_t start = pos;
        if (decode(s, pos) == kReplacementChar) {
            if (pos - start != 3 || static_cast<unsigned char>(s[start]) != 0xEF ||
                static_cast<unsigned char>(s[start + 1]) != 0xBF ||
                static_cast<unsigned char>(s[start + 2]) != 0xBD) {
                return false;
            }
        }
    }
    return true;
}

inline std::vector<uint32_t> decode_all(std::string_view s) {
    std::vector<uint32_t> cps;
    cps.reserve(s.size());
    size_t pos = 0;
    while (pos < s.size()) cps.push_back(decode(s, pos));
    return cps;
}

inline size_t count(std::string_view s) {
    size_t n = 0;
    size_t pos = 0;
    while (pos < s.size()) {
        decode(s, pos);
        ++n;
    }
    return n;
}

// Byte offset just past the first max_chars scalar values (or s.size()).
inline size_t offset_at(std::string_view s, size_t max_chars) {
    size_t pos = 0;
    size_t n = 0;
    while (pos < s.size() && n < max_chars) {
        decode(s, pos);
        ++n;
    }
    return pos;
}

// Calls fn(codepoint) for each scalar value in s.
template <typename Fn>
void for_each(std::string_view s, Fn&& fn) {
    size_t pos = 0;
    while (pos < s.size()) fn(decode(s, pos));
}

}  // namespace curate::utf8
