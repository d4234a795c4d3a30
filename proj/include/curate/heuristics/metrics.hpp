#pragma once

#include <cstddef>
#include <string_view>

namespace curate::heuristics {

// Per-document text statistics backing the rule set. All functions are pure
// and count Unicode scalar values, never bytes.

// Fraction of characters sitting on repeated lines: characters of lines
// whose trimmed content occurs more than once, over all characters on lines
// with non-blank trimmed content. Empty text -> 0.
double duplicate_line_fraction(std::string_view text);

// Occurrences of the most frequent character n-gram, counted greedily
// without overlap, times n, over total characters. Text shorter than n -> 0.
// Non-overlapping counting keeps the result within [0, 1].
double top_ngram_char_fraction(std::string_view text, size_t n);

// Punctuation-or-symbol scalars (categories P and S) over non-whitespace
// scalars. No non-whitespace scalars -> 0.
double symbol_fraction(std::string_view text);

// CJK-ideograph or alphanumeric scalars over non-whitespace scalars. No
// non-whitespace scalars -> 0.
double cjk_or_alnum_fraction(std::string_view text);

// Mean scalar count of lines with non-blank trimmed content; counts the
// full line including surrounding whitespace. No such lines -> 0.
double mean_line_length(std::string_view text);

// Total scalar count.
size_t char_count(std::string_view text);

}  // namespace curate::heuristics
