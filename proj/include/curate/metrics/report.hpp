#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curate/core/document.hpp"
#include "curate/metrics/metrics.hpp"
#include "curate/quality/model.hpp"

namespace curate::metrics {

// Ground truth comes from annotation scores binarized at the same inclusive
// cut the classifiers use.
inline constexpr double kTruthThreshold = 3.0;

struct NamedModel {
    std::string name;
    const quality::QualityModel* model = nullptr;
    const quality::EmbeddingTable* embeddings = nullptr;
};

struct ClassifierEval {
    std::string name;
    bool failed = false;           // model could not score some test doc
    std::string failure_reason;
    ConfusionCounts counts;
    PrfResult per_class;
    MacroMetrics macro;
};

struct EvalReport {
    std::string test_set;
    uint64_t test_size = 0;
    std::vector<ClassifierEval> classifiers;  // input order
};

// Scores every model on every test doc (parallel across docs), binarizes
// predictions at each model's own threshold and labels at kTruthThreshold,
// then aggregates per-class and macro metrics. A model that cannot score
// some doc is marked failed; the others are unaffected. Throws
// Error("bad_input") on empty inputs and Error("missing_annotation") when a
// test doc has no label.
EvalReport compare_classifiers(const std::vector<NamedModel>& models,
                               const std::vector<Document>& test_docs,
                               const std::vector<AnnotationRecord>& labels,
                               const std::string& test_set_name,
                               size_t workers = 1);

// Display rounding to two decimals, half away from zero, applied to the
// decimal expansion rather than the binary double so 0.465 becomes "0.47".
std::string format_2dp(double value);

// Aligned per-classifier table: positive / negative / macro rows crossed
// with precision / recall / f1 columns, two decimals.
std::string render_human(const EvalReport& report);

// One structured record per line, full-precision values. parse_machine is
// the exact inverse; it throws Error("malformed_record") on anything that
// render_machine could not have produced.
std::string render_machine(const EvalReport& report);
EvalReport parse_machine(const std::string& text);

}  // namespace curate::metrics
