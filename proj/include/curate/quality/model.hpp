#pragma once

#include <string>
#include <vector>

#include "curate/core/document.hpp"
#include "curate/quality/features.hpp"

namespace curate::quality {

struct TrainMeta {
    uint32_t epochs = 0;
    double learning_rate = 0.0;
    uint64_t seed = 0;
    uint32_t best_epoch = 0;          // 1-based epoch of the kept checkpoint
    double best_val_macro_f1 = 0.0;
};

// Linear regression head over frozen features: score = w . x + b.
struct QualityModel {
    FeatureExtractor extractor;
    std::vector<double> weights;  // length extractor.output_dimension()
    double bias = 0.0;
    double threshold = 3.0;       // binarization cut point in [0, 5]
    TrainMeta training_meta;
};

struct Prediction {
    double raw = 0.0;      // w . x + b, used for threshold comparison
    double clamped = 0.0;  // raw clamped to [0, 5] for reporting
};

Prediction predict_score(const QualityModel& model, const Document& doc,
                         const EmbeddingTable* embeddings = nullptr);
Prediction predict_score(const QualityModel& model, const SparseVector& features);

// positive iff score >= threshold (inclusive).
Label binarize(double score, double threshold);

// Versioned binary model file: header carrying format version, extractor
// parameters and threshold, then the weight payload. Loading a file whose
// header does not parse or whose version differs fails loudly with
// Error("model_format").
void save_model(const std::string& path, const QualityModel& model);
QualityModel load_model(const std::string& path);

}  // namespace curate::quality
