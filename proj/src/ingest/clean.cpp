#include "curate/ingest/clean.hpp"

#include "curate/core/textnorm.hpp"
#include "curate/core/unicode_classes.hpp"
#include "curate/utf8.hpp"

namespace curate::ingest {

namespace {

bool line_matches(const std::string& line, const LineFilter& f) {
    if (f.pattern.empty()) return false;
    if (f.kind == LineFilter::Kind::prefix) {
        return line.compare(0, f.pattern.size(), f.pattern) == 0;
    }
    return line.find(f.pattern) != std::string::npos;
}

std::string trim_unicode(std::string_view line) {
    // is_space covers Zs/Zl/Zp and the whitespace controls (already stripped
    // upstream, but trim stays total on arbitrary input).
    size_t begin = line.size();
    size_t pos = 0;
    while (pos < line.size()) {
        const size_t at = pos;
        if (!curate::is_space(utf8::decode(line, pos))) {
            begin = at;
            break;
        }
    }
    if (begin == line.size()) return std::string();
    size_t end = begin;
    pos = begin;
    while (pos < line.size()) {
        if (!curate::is_space(utf8::decode(line, pos))) end = pos;
    }
    return std::string(line.substr(begin, end - begin));
}

}  // namespace

std::string clean_text(std::string_view raw, const ParserRule& rule) {
    // Strip control characters first: a control between a base character
    // and a combining mark blocks composition, so normalizing before the
    // strip would not be idempotent.
    std::string stripped;
    stripped.reserve(raw.size());
    utf8::for_each(raw, [&stripped](uint32_t cp) {
        if (cp == '\n' || !curate::is_control(cp)) utf8::append(stripped, cp);
    });

    const std::string normalized = curate::nfc(stripped);

    // Split on '\n', trim, and apply the rule's drop predicates.
    std::vector<std::string> lines;
    size_t start = 0;
    bool any_content = false;
    auto take_line = [&](std::string_view piece) {
        std::string line = trim_unicode(piece);
        if (line.empty()) {
            lines.emplace_back();
            return;
        }
        for (const LineFilter& f : rule.line_filters) {
            if (line_matches(line, f)) return;
        }
        if (utf8::count(line) < rule.min_line_chars) return;
        any_content = true;
        lines.push_back(std::move(line));
    };
    for (size_t i = 0; i <= normalized.size(); ++i) {
        if (i == normalized.size() || normalized[i] == '\n') {
            take_line(std::string_view(normalized).substr(start, i - start));
            start = i + 1;
        }
    }
    if (!any_content) return std::string();

    // Collapse runs of more than two blank lines to a single blank line.
    std::string out;
    size_t blanks = 0;
    bool first = true;
    auto emit = [&](const std::string& line) {
        if (!first) out += '\n';
        out += line;
        first = false;
    };
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            ++blanks;
            continue;
        }
        if (blanks > 0) {
            const size_t keep = blanks > 2 ? 1 : blanks;
            for (size_t k = 0; k < keep; ++k) emit(std::string());
            blanks = 0;
        }
        emit(lines[i]);
    }
    if (blanks > 0) {
        const size_t keep = blanks > 2 ? 1 : blanks;
        for (size_t k = 0; k < keep; ++k) emit(std::string());
    }
    return out;
}

}  // namespace curate::ingest
