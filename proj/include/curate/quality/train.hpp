#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curate/core/document.hpp"
#include "curate/quality/model.hpp"

namespace curate::quality {

struct TrainConfig {
    uint32_t epochs = 20;
    double learning_rate = 3e-4;  // used when lr_grid is empty
    std::vector<double> lr_grid = {1e-4, 3e-4, 1e-3};
    size_t batch_size = 256;
    uint64_t seed = 0;
    // Loss is fixed: squared error against the 0-5 target.

    void validate() const;  // throws Error("bad_config")
};

// One annotated training example with its text bound in.
struct LabeledExample {
    std::string doc_id;
    std::string text;
    double target = 0.0;  // 0-5
};

// Binds annotation scores to document texts by doc id. Throws
// Error("missing_document") when a record has no matching document.
std::vector<LabeledExample> join_annotations(
    const std::vector<Document>& docs,
    const std::vector<AnnotationRecord>& records);

struct EpochPoint {
    uint32_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_macro_f1 = 0.0;
};

struct TrainingCurve {
    double learning_rate = 0.0;
    bool diverged = false;
    std::vector<EpochPoint> points;
};

struct TrainResult {
    QualityModel model;  // best (learning rate, epoch) checkpoint
    std::vector<TrainingCurve> curves;  // grid order
    double chosen_learning_rate = 0.0;
    uint32_t chosen_epoch = 0;
    std::vector<std::string> warnings;
};

// Mini-batch gradient descent on the squared error of (w . x + b) against
// the integer score. Only the head trains; features are extracted once and
// frozen. After every epoch the validation macro-F1 at threshold 3 is
// recorded; the returned model is the checkpoint maximizing it across the
// whole grid, ties broken toward the lower training loss. Rates whose loss
// goes non-finite are marked diverged and excluded from selection; if every
// rate diverges the call fails.
TrainResult train_regressor(const std::vector<LabeledExample>& train,
                            const std::vector<LabeledExample>& val,
                            const FeatureExtractor& fx, const TrainConfig& cfg);

// One line per (learning rate, epoch) point, full precision.
void save_training_curves(const std::string& path,
                          const std::vector<TrainingCurve>& curves);
std::vector<TrainingCurve> load_training_curves(const std::string& path);

// Deterministic shuffle split. test size = round(n * test_fraction); throws
// Error("bad_config") unless 0 < test_fraction < 1 and n >= 2.
std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>>
split_train_test(const std::vector<AnnotationRecord>& records,
                 double test_fraction, uint64_t seed);

// Batch-mean squared-error loss and its analytic gradient, exposed so the
// gradient can be verified against finite differences.
double mse_loss(const std::vector<double>& weights, double bias,
                const std::vector<const SparseVector*>& x,
                const std::vector<double>& y);

struct MseGradient {
    std::unordered_map<uint32_t, double> weight_grad;  // zero entries omitted
    double bias_grad = 0.0;
};
MseGradient mse_gradient(const std::vector<double>& weights, double bias,
                         const std::vector<const SparseVector*>& x,
                         const std::vector<double>& y);

}  // namespace curate::quality
