#include "curate/heuristics/rules.hpp"

#include <string>

#include "curate/error.hpp"
#include "curate/heuristics/metrics.hpp"

namespace curate::heuristics {

void HeuristicRuleSet::validate() const {
    if (min_chars > max_chars) {
        throw Error("bad_config", "min_chars must not exceed max_chars");
    }
    auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!fraction_ok(max_duplicate_line_fraction) ||
        !fraction_ok(max_symbol_fraction) ||
        !fraction_ok(min_cjk_or_alnum_fraction)) {
        throw Error("bad_config", "fractions must lie in [0, 1]");
    }
    for (const auto& [n, f] : max_top_ngram_char_fraction) {
        if (n < 2) throw Error("bad_config", "top n-gram sizes must be >= 2");
        if (!fraction_ok(f)) throw Error("bad_config", "fractions must lie in [0, 1]");
    }
    if (mean_line_len_min > mean_line_len_max) {
        throw Error("bad_config", "mean_line_len bounds are inverted");
    }
}

FilterVerdict apply_heuristics(const Document& doc, const HeuristicRuleSet& rules) {
    auto fail = [](const std::string& rule) {
        return FilterVerdict::failed(Stage::heuristic, rule);
    };

    const size_t chars = char_count(doc.text);
    if (chars < rules.min_chars) return fail("min_chars");
    if (chars > rules.max_chars) return fail("max_chars");

    if (symbol_fraction(doc.text) > rules.max_symbol_fraction) {
        return fail("max_symbol_fraction");
    }
    if (cjk_or_alnum_fraction(doc.text) < rules.min_cjk_or_alnum_fraction) {
        return fail("min_cjk_or_alnum_fraction");
    }

    const double mean_len = mean_line_length(doc.text);
    if (mean_len < rules.mean_line_len_min || mean_len > rules.mean_line_len_max) {
        return fail("mean_line_len_bounds");
    }

    if (duplicate_line_fraction(doc.text) > rules.max_duplicate_line_fraction) {
        return fail("max_duplicate_line_fraction");
    }

    for (const auto& [n, limit] : rules.max_top_ngram_char_fraction) {
        if (top_ngram_char_fraction(doc.text, n) > limit) {
            return fail("max_top_ngram_char_fraction_" + std::to_string(n));
        }
    }
    return FilterVerdict::passed(Stage::heuristic);
}

FilterVerdict basic_quality_filter(const Document& doc,
                                   const BasicQualityModel& model) {
    if (doc.text.empty()) {
        return FilterVerdict::failed(Stage::basic_quality, "empty_after_clean");
    }
    const quality::Prediction p = quality::predict_score(model.model, doc);
    FilterVerdict verdict;
    verdict.stage = Stage::basic_quality;
    verdict.score = p.raw;
    if (p.raw >= model.pass_threshold) {
        verdict.pass = true;
    } else {
        verdict.pass = false;
        verdict.reason = "basic_quality";
    }
    return verdict;
}

}  // namespace curate::heuristics
