#include "curate/heuristics/metrics.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "curate/core/unicode_classes.hpp"
#include "curate/hash.hpp"
#include "curate/utf8.hpp"

namespace curate::heuristics {

namespace {

struct Line {
    std::string_view full;      // raw line content
    std::string_view trimmed;   // without surrounding whitespace
};

std::string_view trim_view(std::string_view line) {
    size_t begin = line.size();
    size_t pos = 0;
    while (pos < line.size()) {
        const size_t at = pos;
        if (!curate::is_space(utf8::decode(line, pos))) {
            begin = at;
            break;
        }
    }
    if (begin == line.size()) return std::string_view();
    size_t end = begin;
    pos = begin;
    while (pos < line.size()) {
        if (!curate::is_space(utf8::decode(line, pos))) end = pos;
    }
    return line.substr(begin, end - begin);
}

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            const std::string_view full = text.substr(start, i - start);
            lines.push_back({full, trim_view(full)});
            start = i + 1;
        }
    }
    return lines;
}

}  // namespace

size_t char_count(std::string_view text) { return utf8::count(text); }

double duplicate_line_fraction(std::string_view text) {
    if (text.empty()) return 0.0;
    const std::vector<Line> lines = split_lines(text);
    std::unordered_map<std::string_view, size_t> occurrences;
    for (const Line& line : lines) {
        if (!line.trimmed.empty()) ++occurrences[line.trimmed];
    }
    size_t total = 0;
    size_t duplicated = 0;
    for (const Line& line : lines) {
        if (line.trimmed.empty()) continue;
        const size_t chars = utf8::count(line.full);
        total += chars;
        if (occurrences[line.trimmed] > 1) duplicated += chars;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(duplicated) / static_cast<double>(total);
}

double top_ngram_char_fraction(std::string_view text, size_t n) {
    if (n == 0 || text.empty()) return 0.0;
    std::vector<size_t> offsets;
    offsets.reserve(text.size() + 1);
    size_t pos = 0;
    while (pos < text.size()) {
        offsets.push_back(pos);
        utf8::decode(text, pos);
    }
    offsets.push_back(text.size());
    const size_t chars = offsets.size() - 1;
    if (chars < n) return 0.0;

    // Walk start positions in order, folding each gram's greedy
    // non-overlapping count into an open-addressing table keyed by the gram
    // hash. Slots remember the first occurrence so hash collisions between
    // distinct grams fall through to the next slot instead of merging.
    const size_t grams = chars - n + 1;
    const auto gram_at = [&](size_t i) {
        return std::string_view(text.substr(offsets[i], offsets[i + n] - offsets[i]));
    };
    struct Slot {
        uint64_t hash = 0;
        uint32_t first = 0;
        uint32_t count = 0;
        uint32_t next_free = 0;
        bool used = false;
    };
    size_t capacity = 16;
    while (capacity < grams * 2) capacity *= 2;
    std::vector<Slot> table(capacity);
    const size_t mask = capacity - 1;
    size_t best = 0;
    for (size_t i = 0; i < grams; ++i) {
        const std::string_view gram = gram_at(i);
        const uint64_t h = hash64(gram);
        size_t at = h & mask;
        while (table[at].used &&
               (table[at].hash != h || gram_at(table[at].first) != gram)) {
            at = (at + 1) & mask;
        }
        Slot& slot = table[at];
        if (!slot.used) {
            slot.used = true;
            slot.hash = h;
            slot.first = static_cast<uint32_t>(i);
        }
        if (i >= slot.next_free) {
            ++slot.count;
            slot.next_free = static_cast<uint32_t>(i + n);
            best = std::max(best, static_cast<size_t>(slot.count));
        }
    }
    return static_cast<double>(best * n) / static_cast<double>(chars);
}

double symbol_fraction(std::string_view text) {
    size_t symbols = 0;
    size_t considered = 0;
    utf8::for_each(text, [&](uint32_t cp) {
        if (curate::is_space(cp)) return;
        ++considered;
        if (curate::is_punct_or_symbol(cp)) ++symbols;
    });
    if (considered == 0) return 0.0;
    return static_cast<double>(symbols) / static_cast<double>(considered);
}

double cjk_or_alnum_fraction(std::string_view text) {
    size_t hits = 0;
    size_t considered = 0;
    utf8::for_each(text, [&](uint32_t cp) {
        if (curate::is_space(cp)) return;
        ++considered;
        if (curate::is_cjk_or_alnum(cp)) ++hits;
    });
    if (considered == 0) return 0.0;
    return static_cast<double>(hits) / static_cast<double>(considered);
}

double mean_line_length(std::string_view text) {
    if (text.empty()) return 0.0;
    size_t lines = 0;
    size_t chars = 0;
    for (const Line& line : split_lines(text)) {
        if (line.trimmed.empty()) continue;
        ++lines;
        chars += utf8::count(line.full);
    }
    if (lines == 0) return 0.0;
    return static_cast<double>(chars) / static_cast<double>(lines);
}

}  // namespace curate::heuristics
