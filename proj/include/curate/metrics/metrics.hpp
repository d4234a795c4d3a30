#pragma once

#include <cstdint>
#include <vector>

#include "curate/core/document.hpp"

namespace curate::metrics {

// Positive class = "high quality".
struct ConfusionCounts {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t tn = 0;
    uint64_t fn = 0;

    uint64_t total() const { return tp + fp + tn + fn; }
};

// A 0/0 ratio is reported as 0 with its degenerate flag set rather than
// poisoning the report with NaN.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
};

struct PrfResult {
    ClassMetrics positive;
    ClassMetrics negative;
};

struct MacroMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Standard counts over aligned label sequences. Throws Error("bad_input")
// on length mismatch or empty input.
ConfusionCounts confusion(const std::vector<Label>& predictions,
                          const std::vector<Label>& truth);

// Per-class precision/recall/F1. Each value is a single division of exact
// integer counts (F1 = 2tp / (2tp + fp + fn)), so the doubles are the
// correctly rounded values of the underlying rationals.
PrfResult prf(const ConfusionCounts& c);

// Unweighted mean of the two per-class values, metric by metric. Macro-F1
// is the mean of class F1 scores, not the F1 of averaged P/R.
MacroMetrics macro_average(const PrfResult& per_class);

}  // namespace curate::metrics
