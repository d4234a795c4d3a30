#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "curate/core/document.hpp"
#include "curate/quality/model.hpp"

namespace curate::heuristics {

// Rule thresholds; all tunable via config. The correctness contract is the
// metric definitions, not these numbers.
struct HeuristicRuleSet {
    size_t min_chars = 50;
    size_t max_chars = 500000;
    double max_duplicate_line_fraction = 0.30;
    // Checked in list order; reason carries the n, e.g.
    // "max_top_ngram_char_fraction_3".
    std::vector<std::pair<size_t, double>> max_top_ngram_char_fraction = {
        {2, 0.20}, {3, 0.18}, {4, 0.16}};
    double max_symbol_fraction = 0.30;
    double min_cjk_or_alnum_fraction = 0.60;
    double mean_line_len_min = 5.0;
    double mean_line_len_max = 5000.0;

    void validate() const;  // throws Error("bad_config")
};

// Evaluates rules in a fixed order and reports the first failure:
//   min_chars, max_chars, max_symbol_fraction, min_cjk_or_alnum_fraction,
//   mean_line_len_bounds, max_duplicate_line_fraction, then each
//   max_top_ngram_char_fraction entry in list order.
FilterVerdict apply_heuristics(const Document& doc, const HeuristicRuleSet& rules);

// Trained gate into the basic-quality corpus: a quality model plus the score
// floor a document must reach.
struct BasicQualityModel {
    quality::QualityModel model;
    double pass_threshold = 0.5;
};

// Attaches the model score; pass = score >= pass_threshold (inclusive).
// Empty text cannot be featurized and fails with "empty_after_clean".
FilterVerdict basic_quality_filter(const Document& doc,
                                   const BasicQualityModel& model);

}  // namespace curate::heuristics
