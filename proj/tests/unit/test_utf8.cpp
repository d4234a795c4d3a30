#include <doctest.h>

#include <string>
#include <vector>

#include "curate/utf8.hpp"

using namespace curate;

TEST_CASE("decode handles each sequence length") {
    const std::string s = "a\xC3\xA9\xE4\xB8\xAD\xF0\x9F\x98\x80";  // a é 中 😀
    size_t pos = 0;
    CHECK(utf8::decode(s, pos) == U'a');
    CHECK(pos == 1);
    CHECK(utf8::decode(s, pos) == 0xE9);
    CHECK(pos == 3);
    CHECK(utf8::decode(s, pos) == 0x4E2D);
    CHECK(pos == 6);
    CHECK(utf8::decode(s, pos) == 0x1F600);
    CHECK(pos == 10);
}

TEST_CASE("decode flags malformed input as replacement") {
    auto first = [](const std::string& s) {
        size_t pos = 0;
        const uint32_t cp = utf8::decode(s, pos);
        return std::pair<uint32_t, size_t>(cp, pos);
    };
    CHECK(first("\x80x") == std::pair<uint32_t, size_t>(utf8::kReplacementChar, 1));
    CHECK(first("\xC3") == std::pair<uint32_t, size_t>(utf8::kReplacementChar, 1));
    CHECK(first("\xC0\xA0") ==  // overlong space
          std::pair<uint32_t, size_t>(utf8::kReplacementChar, 2));
    CHECK(first("\xE0\x80\xA0") ==  // overlong three-byte
          std::pair<uint32_t, size_t>(utf8::kReplacementChar, 3));
    CHECK(first("\xED\xA0\x80") ==  // surrogate half
          std::pair<uint32_t, size_t>(utf8::kReplacementChar, 3));
    CHECK(first("\xF4\x90\x80\x80") ==  // past U+10FFFF
          std::pair<uint32_t, size_t>(utf8::kReplacementChar, 4));
    CHECK(first("\xFFx") == std::pair<uint32_t, size_t>(utf8::kReplacementChar, 1));
}

TEST_CASE("append is the inverse of decode for every scalar value") {
    for (uint32_t cp = 0; cp <= 0x10FFFF; ++cp) {
        if (cp >= 0xD800 && cp <= 0xDFFF) continue;
        if (cp % 257 != 0 && cp != 0x7F && cp != 0x80 && cp != 0x7FF &&
            cp != 0x800 && cp != 0xFFFF && cp != 0x10000 && cp != 0x10FFFF) {
            continue;  // sample the range plus all boundaries
        }
        std::string buf;
        utf8::append(buf, cp);
        size_t pos = 0;
        CHECK(utf8::decode(buf, pos) == cp);
        CHECK(pos == buf.size());
    }
}

TEST_CASE("valid accepts well-formed text and rejects broken bytes") {
    CHECK(utf8::valid(""));
    CHECK(utf8::valid("plain ascii"));
    CHECK(utf8::valid("caf\xC3\xA9 \xE4\xB8\xAD\xE6\x96\x87"));
    CHECK(utf8::valid("\xEF\xBF\xBD"));  // encoded U+FFFD itself
    CHECK_FALSE(utf8::valid("\x80"));
    CHECK_FALSE(utf8::valid("ab\xC3"));
    CHECK_FALSE(utf8::valid("\xED\xA0\x80"));
    CHECK_FALSE(utf8::valid("\xC0\xA0"));
}

TEST_CASE("count and offset_at track scalar values not bytes") {
    const std::string s = "a\xC3\xA9\xE4\xB8\xAD\xF0\x9F\x98\x80";
    CHECK(utf8::count(s) == 4);
    CHECK(utf8::count("") == 0);
    CHECK(utf8::offset_at(s, 0) == 0);
    CHECK(utf8::offset_at(s, 1) == 1);
    CHECK(utf8::offset_at(s, 2) == 3);
    CHECK(utf8::offset_at(s, 3) == 6);
    CHECK(utf8::offset_at(s, 4) == 10);
    CHECK(utf8::offset_at(s, 99) == s.size());
}

TEST_CASE("decode_all and for_each visit the same scalars") {
    const std::string s = "x\xC3\xA9-\xE4\xB8\xAD";
    const std::vector<uint32_t> all = utf8::decode_all(s);
    CHECK(all == std::vector<uint32_t>{U'x', 0xE9, U'-', 0x4E2D});
    std::vector<uint32_t> seen;
    utf8::for_each(s, [&](uint32_t cp) { seen.push_back(cp); });
    CHECK(seen == all);
}
