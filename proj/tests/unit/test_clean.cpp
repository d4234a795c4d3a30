#include <doctest.h>

#include <unicode/uchar.h>

#include <random>
#include <string>

#include "curate/core/textnorm.hpp"
#include "curate/core/unicode_classes.hpp"
#include "curate/ingest/clean.hpp"
#include "curate/utf8.hpp"

using namespace curate;
using ingest::clean_text;
using ingest::LineFilter;
using ingest::ParserRule;
using ingest::ParserRules;

TEST_CASE("character classes agree with the linked icu across all planes") {
    for (uint32_t cp = 0; cp <= 0x10FFFF; ++cp) {
        if (cp >= 0xD800 && cp <= 0xDFFF) continue;
        const int8_t t = u_charType(static_cast<UChar32>(cp));
        const bool icu_control = t == U_CONTROL_CHAR;
        const bool icu_punct =
            t == U_DASH_PUNCTUATION || t == U_START_PUNCTUATION ||
            t == U_END_PUNCTUATION || t == U_CONNECTOR_PUNCTUATION ||
            t == U_OTHER_PUNCTUATION || t == U_INITIAL_PUNCTUATION ||
            t == U_FINAL_PUNCTUATION || t == U_MATH_SYMBOL ||
            t == U_CURRENCY_SYMBOL || t == U_MODIFIER_SYMBOL ||
            t == U_OTHER_SYMBOL;
        const bool icu_space = t == U_SPACE_SEPARATOR || t == U_LINE_SEPARATOR ||
                               t == U_PARAGRAPH_SEPARATOR || cp == 0x09 ||
                               cp == 0x0A || cp == 0x0B || cp == 0x0C ||
                               cp == 0x0D || cp == 0x85;
        if (is_control(cp) != icu_control || is_punct_or_symbol(cp) != icu_punct ||
            is_space(cp) != icu_space) {
            CAPTURE(cp);
            REQUIRE(is_control(cp) == icu_control);
            REQUIRE(is_punct_or_symbol(cp) == icu_punct);
            REQUIRE(is_space(cp) == icu_space);
        }
    }
    CHECK(is_cjk_or_alnum(U'a'));
    CHECK(is_cjk_or_alnum(U'Z'));
    CHECK(is_cjk_or_alnum(U'7'));
    CHECK(is_cjk_or_alnum(0x4E2D));   // 中
    CHECK(is_cjk_or_alnum(0x3400));   // extension A start
    CHECK(is_cjk_or_alnum(0x20000));  // extension B start
    CHECK(is_cjk_or_alnum(0xFF15));   // fullwidth five
    CHECK_FALSE(is_cjk_or_alnum(U' '));
    CHECK_FALSE(is_cjk_or_alnum(U'.'));
    CHECK_FALSE(is_cjk_or_alnum(0x3042));  // hiragana A
}

TEST_CASE("clean_text strips controls and normalizes line endings") {
    const ParserRule rule;
    CHECK(clean_text("one\r\ntwo\r\nthree", rule) == "one\ntwo\nthree");
    CHECK(clean_text("a\x01" "b\x1F" "c", rule) == "abc");
    CHECK(clean_text("tab\tseparated", rule) == "tabseparated");
    CHECK(clean_text("", rule) == "");
}

TEST_CASE("clean_text applies unicode normalization form c") {
    const ParserRule rule;
    // decomposed e + combining acute composes
    CHECK(clean_text("caf\x65\xCC\x81", rule) == "caf\xC3\xA9");
    // a control between base and mark must not block composition
    CHECK(clean_text("caf\x65\x08\xCC\x81", rule) == "caf\xC3\xA9");
    // fullwidth stays fullwidth under NFC (no compatibility folding)
    CHECK(clean_text("\xEF\xBC\x95", rule) == "\xEF\xBC\x95");
}

TEST_CASE("clean_text trims lines and collapses blank runs") {
    const ParserRule rule;
    CHECK(clean_text("  hello  \n\tworld\t", rule) == "hello\nworld");
    CHECK(clean_text("a\n\nb", rule) == "a\n\nb");        // one blank kept
    CHECK(clean_text("a\n\n\nb", rule) == "a\n\n\nb");    // two blanks kept
    CHECK(clean_text("a\n\n\n\nb", rule) == "a\n\nb");    // three collapse to one
    CHECK(clean_text("a\n\n\n\n\n\n\n\nb", rule) == "a\n\nb");
    CHECK(clean_text("   \n\t\n  \n", rule) == "");       // nothing but blanks
    CHECK(clean_text("\xE3\x80\x80ideographic space\xE3\x80\x80", rule) ==
          "ideographic space");
}

TEST_CASE("line filters drop matching lines entirely") {
    ParserRule rule;
    rule.line_filters.push_back({LineFilter::Kind::substring, "cookie"});
    rule.line_filters.push_back({LineFilter::Kind::prefix, "Advertisement"});
    CHECK(clean_text("keep me\naccept cookies to continue\nalso keep", rule) ==
          "keep me\nalso keep");
    CHECK(clean_text("Advertisement: buy now\nreal content", rule) ==
          "real content");
    // prefix matches the trimmed line, not the raw one
    CHECK(clean_text("   Advertisement here\nbody", rule) == "body");
    // substring match mid-line
    CHECK(clean_text("the cookie banner\nbody", rule) == "body");
    // empty patterns never match
    rule.line_filters.push_back({LineFilter::Kind::substring, ""});
    CHECK(clean_text("anything", rule) == "anything");
}

TEST_CASE("min_line_chars drops short non-blank lines") {
    ParserRule rule;
    rule.min_line_chars = 5;
    CHECK(clean_text("tiny\nlong enough line\nok!", rule) == "long enough line");
    // a trailing newline survives as a trailing blank line
    CHECK(clean_text("tiny\nlong enough line\nok!\n", rule) ==
          "long enough line\n");
    // blank lines are exempt from the length rule
    CHECK(clean_text("long enough line\n\nanother long line", rule) ==
          "long enough line\n\nanother long line");
    // scalar count, not bytes: four CJK chars is still short
    CHECK(clean_text("\xE4\xB8\xAD\xE6\x96\x87\xE4\xB8\xAD\xE6\x96\x87", rule) == "");
}

TEST_CASE("all lines filtered yields empty text") {
    ParserRule rule;
    rule.line_filters.push_back({LineFilter::Kind::substring, "spam"});
    CHECK(clean_text("spam one\nspam two", rule) == "");
}

TEST_CASE("clean_text is idempotent on fuzzed input") {
    std::mt19937_64 rng(20240229);
    const uint32_t pool[] = {
        'a',    'b',    'Z',    '0',    ' ',    '\n',   '\t',   '\r',
        0x01,   0x08,   0x7F,   0xE9,   0x65,   0x301,  0x4E2D, 0x3000,
        0x2028, 0x1F600, 0xFF15, 0x85,  '.',    '!',
    };
    for (int iter = 0; iter < 500; ++iter) {
        std::string raw;
        const size_t len = rng() % 160;
        for (size_t i = 0; i < len; ++i) {
            utf8::append(raw, pool[rng() % (sizeof(pool) / sizeof(pool[0]))]);
        }
        ParserRule rule;
        if (iter % 3 == 0) rule.min_line_chars = rng() % 4;
        if (iter % 4 == 0) {
            rule.line_filters.push_back({LineFilter::Kind::substring, "ab"});
        }
        const std::string once = clean_text(raw, rule);
        const std::string twice = clean_text(once, rule);
        CAPTURE(iter);
        CHECK(once == twice);
    }
}

TEST_CASE("parser rules fall back to the default source") {
    ParserRules rules;
    ParserRule news;
    news.source = "news";
    news.min_line_chars = 3;
    rules.by_source["news"] = news;
    CHECK(rules.for_source("news").min_line_chars == 3);
    CHECK(rules.for_source("blog").min_line_chars == 0);
    CHECK(rules.for_source("default").source == "default");
}
