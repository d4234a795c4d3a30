#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace curate::ingest {

// Line-level drop predicate. Patterns match against the trimmed line; an
// empty pattern never matches.
struct LineFilter {
    enum class Kind { substring, prefix };
    Kind kind = Kind::substring;
    std::string pattern;
};

// Declarative per-source cleaning rule.
struct ParserRule {
    std::string source = "default";
    std::vector<LineFilter> line_filters;
    size_t min_line_chars = 0;  // Unicode scalars, non-blank lines only
};

// Rule registry; the "default" rule always exists.
struct ParserRules {
    std::map<std::string, ParserRule> by_source;

    ParserRules() { by_source.emplace("default", ParserRule{}); }
    const ParserRule& for_source(const std::string& source) const {
        auto it = by_source.find(source);
        if (it != by_source.end()) return it->second;
        return by_source.at("default");
    }
};

// Normalizes raw text for downstream stages:
//   - control characters other than '\n' removed (this covers CRLF -> LF)
//   - Unicode normalization form C
//   - per line: whitespace trimmed; lines matching a filter or trimming to
//     fewer than min_line_chars scalars dropped (blank lines exempt)
//   - runs of more than two blank lines collapsed to one
//   - text reduced to only blank lines becomes ""
// Idempotent: cleaning a cleaned string is the identity.
std::string clean_text(std::string_view raw, const ParserRule& rule);

}  // namespace curate::ingest
