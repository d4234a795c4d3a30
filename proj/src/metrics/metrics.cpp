#include "curate/metrics/metrics.hpp"

#include "curate/error.hpp"

namespace curate::metrics {

ConfusionCounts confusion(const std::vector<Label>& predictions,
                          const std::vector<Label>& truth) {
    if (predictions.empty() || predictions.size() != truth.size()) {
        throw Error("bad_input", "prediction and truth lengths must match and be nonzero");
    }
    ConfusionCounts c;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] == Label::positive;
        const bool t = truth[i] == Label::positive;
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

namespace {

void ratio(uint64_t num, uint64_t den, double& out, bool& degenerate) {
    if (den == 0) {
        out = 0.0;
        degenerate = true;
    } else {
        out = static_cast<double>(num) / static_cast<double>(den);
        degenerate = false;
    }
}

}  // namespace

PrfResult prf(const ConfusionCounts& c) {
    PrfResult r;
    ratio(c.tp, c.tp + c.fp, r.positive.precision, r.positive.precision_degenerate);
    ratio(c.tp, c.tp + c.fn, r.positive.recall, r.positive.recall_degenerate);
    ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, r.positive.f1, r.positive.f1_degenerate);
    // Negative class: tn plays tp's role; fn are wrongly-negative calls, so
    // they take fp's place, and vice versa.
    ratio(c.tn, c.tn + c.fn, r.negative.precision, r.negative.precision_degenerate);
    ratio(c.tn, c.tn + c.fp, r.negative.recall, r.negative.recall_degenerate);
    ratio(2 * c.tn, 2 * c.tn + c.fn + c.fp, r.negative.f1, r.negative.f1_degenerate);
    return r;
}

MacroMetrics macro_average(const PrfResult& per_class) {
    MacroMetrics m;
    m.precision = (per_class.positive.precision + per_class.negative.precision) / 2.0;
    m.recall = (per_class.positive.recall + per_class.negative.recall) / 2.0;
    m.f1 = (per_class.positive.f1 + per_class.negative.f1) / 2.0;
    return m;
}

}  // namespace curate::metrics
