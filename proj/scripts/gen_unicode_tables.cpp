// Regenerates src/core/unicode_tables.inc from the ICU build the library
// links against, so the range tables and ICU normalization always agree.
//
// Build and run from the repository root:
//   g++ -O2 scripts/gen_unicode_tables.cpp -licuuc -o /tmp/gen_unicode_tables
//   /tmp/gen_unicode_tables src/core/unicode_tables.inc
//
// Emits sorted, merged codepoint ranges for:
//   - general categories P* and S* (punctuation + symbol)
//   - general category Cc (control)
//   - Zs/Zl/Zp plus the Cc whitespace set (tab, LF, VT, FF, CR, NEL)

#include <unicode/uchar.h>
#include <unicode/uversion.h>

#include <cstdint>
#include <cstdio>
#include <functional>
#include <utility>
#include <vector>

namespace {

constexpr uint32_t kMaxCp = 0x110000;

std::vector<std::pair<uint32_t, uint32_t>> ranges(
    const std::function<bool(uint32_t)>& pred) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    bool open = false;
    uint32_t start = 0;
    for (uint32_t cp = 0; cp < kMaxCp; ++cp) {
        if (pred(cp)) {
            if (!open) {
                open = true;
                start = cp;
            }
        } else if (open) {
            out.emplace_back(start, cp - 1);
            open = false;
        }
    }
    if (open) out.emplace_back(start, kMaxCp - 1);
    return out;
}

void emit(std::FILE* f, const char* name,
          const std::vector<std::pair<uint32_t, uint32_t>>& rs) {
    std::fprintf(f, "static constexpr CodepointRange %s[] = {\n", name);
    for (size_t i = 0; i < rs.size(); i += 4) {
        std::fprintf(f, "   ");
        for (size_t k = i; k < rs.size() && k < i + 4; ++k) {
            std::fprintf(f, " {0x%X, 0x%X},", rs[k].first, rs[k].second);
        }
        std::fprintf(f, "\n");
    }
    std::fprintf(f, "};\n\n");
}

bool is_whitespace_cc(uint32_t cp) {
    return cp == 0x09 || cp == 0x0A || cp == 0x0B || cp == 0x0C || cp == 0x0D ||
           cp == 0x85;
}

}  // namespace

int main(int argc, char** argv) {
    const char* out_path = argc > 1 ? argv[1] : "src/core/unicode_tables.inc";

    const auto punct_symbol = ranges([](uint32_t cp) {
        switch (u_charType(static_cast<UChar32>(cp))) {
            case U_DASH_PUNCTUATION:
            case U_START_PUNCTUATION:
            case U_END_PUNCTUATION:
            case U_CONNECTOR_PUNCTUATION:
            case U_OTHER_PUNCTUATION:
            case U_INITIAL_PUNCTUATION:
            case U_FINAL_PUNCTUATION:
            case U_MATH_SYMBOL:
            case U_CURRENCY_SYMBOL:
            case U_MODIFIER_SYMBOL:
            case U_OTHER_SYMBOL:
                return true;
            default:
                return false;
        }
    });
    const auto control = ranges([](uint32_t cp) {
        return u_charType(static_cast<UChar32>(cp)) == U_CONTROL_CHAR;
    });
    const auto white = ranges([](uint32_t cp) {
        switch (u_charType(static_cast<UChar32>(cp))) {
            case U_SPACE_SEPARATOR:
            case U_LINE_SEPARATOR:
            case U_PARAGRAPH_SEPARATOR:
                return true;
            default:
                return is_whitespace_cc(cp);
        }
    });

    std::FILE* f = std::fopen(out_path, "w");
    if (f == nullptr) {
        std::fprintf(stderr, "cannot open %s\n", out_path);
        return 1;
    }
    UVersionInfo icu_ver;
    UVersionInfo uni_ver;
    char icu_str[U_MAX_VERSION_STRING_LENGTH];
    char uni_str[U_MAX_VERSION_STRING_LENGTH];
    u_getVersion(icu_ver);
    u_getUnicodeVersion(uni_ver);
    u_versionToString(icu_ver, icu_str);
    u_versionToString(uni_ver, uni_str);
    std::fprintf(f,
                 "// Generated by scripts/gen_unicode_tables.cpp (ICU %s, "
                 "Unicode %s). Do not edit by hand.\n\n",
                 icu_str, uni_str);
    emit(f, "kPunctSymbolRanges", punct_symbol);
    emit(f, "kControlRanges", control);
    emit(f, "kWhitespaceRanges", white);
    std::fclose(f);
    std::printf("wrote %s: %zu P/S ranges, %zu Cc ranges, %zu whitespace ranges\n",
                out_path, punct_symbol.size(), control.size(), white.size());
    return 0;
}
