#include "curate/core/unicode_classes.hpp"

#include <cstddef>

namespace curate {

namespace {

struct CodepointRange {
    uint32_t lo;
    uint32_t hi;
};

#include "unicode_tables.inc"

template <size_t N>
bool in_ranges(uint32_t cp, const CodepointRange (&ranges)[N]) {
    size_t lo = 0;
    size_t hi = N;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (cp < ranges[mid].lo) {
            hi = mid;
        } else if (cp > ranges[mid].hi) {
            lo = mid + 1;
        } else {
            return true;
        }
    }
    return false;
}

}  // namespace

bool is_punct_or_symbol(uint32_t cp) { return in_ranges(cp, kPunctSymbolRanges); }

bool is_control(uint32_t cp) { return in_ranges(cp, kControlRanges); }

bool is_space(uint32_t cp) { return in_ranges(cp, kWhitespaceRanges); }

bool is_cjk_or_alnum(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') ||
               (cp >= 'a' && cp <= 'z');
    }
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;    // unified ideographs
    if (cp >= 0x3400 && cp <= 0x4DBF) return true;    // extension A
    if (cp >= 0x20000 && cp <= 0x2EBEF) return true;  // extensions B-F
    if (cp >= 0xFF10 && cp <= 0xFF19) return true;    // fullwidth digits
    return false;
}

}  // namespace curate
