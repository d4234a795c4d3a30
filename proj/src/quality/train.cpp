#include "curate/quality/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "curate/error.hpp"
#include "curate/hash.hpp"
#include "curate/metrics/metrics.hpp"

namespace curate::quality {

void TrainConfig::validate() const {
    if (epochs < 1) throw Error("bad_config", "epochs must be >= 1");
    if (batch_size < 1) throw Error("bad_config", "batch_size must be >= 1");
    if (learning_rate <= 0.0) throw Error("bad_config", "learning_rate must be > 0");
    for (double lr : lr_grid) {
        if (lr <= 0.0) throw Error("bad_config", "learning rates must be > 0");
    }
}

std::vector<LabeledExample> join_annotations(
    const std::vector<Document>& docs,
    const std::vector<AnnotationRecord>& records) {
    std::unordered_map<std::string, const Document*> by_id;
    by_id.reserve(docs.size());
    for (const Document& d : docs) by_id.emplace(d.id, &d);
    std::vector<LabeledExample> out;
    out.reserve(records.size());
    for (const AnnotationRecord& r : records) {
        auto it = by_id.find(r.doc_id);
        if (it == by_id.end()) {
            throw Error("missing_document", "no document for annotation " + r.doc_id);
        }
        out.push_back({r.doc_id, it->second->text, static_cast<double>(r.score)});
    }
    return out;
}

std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>>
split_train_test(const std::vector<AnnotationRecord>& records,
                 double test_fraction, uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error("bad_config", "test_fraction must lie in (0, 1)");
    }
    if (records.size() < 2) {
        throw Error("bad_config", "need at least 2 records to split");
    }
    std::vector<size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with our own stream so the split never depends on the
    // standard library's shuffle implementation.
    uint64_t state = seed ^ 0x73706C6974ULL;  // distinct stream per purpose
    for (size_t i = order.size() - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(splitmix64(state) % (i + 1));
        std::swap(order[i], order[j]);
    }
    const auto test_size = static_cast<size_t>(
        std::llround(static_cast<double>(records.size()) * test_fraction));
    std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>> out;
    for (size_t k = 0; k < order.size(); ++k) {
        if (k < test_size) {
            out.second.push_back(records[order[k]]);
        } else {
            out.first.push_back(records[order[k]]);
        }
    }
    return out;
}

double mse_loss(const std::vector<double>& weights, double bias,
                const std::vector<const SparseVector*>& x,
                const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw Error("bad_input", "loss needs aligned, non-empty inputs");
    }
    double sum = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
        const double r = x[k]->dot(weights) + bias - y[k];
        sum += r * r;
    }
    return sum / static_cast<double>(x.size());
}

MseGradient mse_gradient(const std::vector<double>& weights, double bias,
                         const std::vector<const SparseVector*>& x,
                         const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw Error("bad_input", "gradient needs aligned, non-empty inputs");
    }
    MseGradient g;
    const double scale = 2.0 / static_cast<double>(x.size());
    for (size_t k = 0; k < x.size(); ++k) {
        const double r = x[k]->dot(weights) + bias - y[k];
        g.bias_grad += scale * r;
        for (size_t j = 0; j < x[k]->indices.size(); ++j) {
            g.weight_grad[x[k]->indices[j]] += scale * r * x[k]->values[j];
        }
    }
    return g;
}

namespace {

struct Checkpoint {
    bool set = false;
    std::vector<double> weights;
    double bias = 0.0;
    double val_macro_f1 = -1.0;
    double train_loss = 0.0;
    double learning_rate = 0.0;
    uint32_t epoch = 0;

    // Selection order: higher val F1 first, then the tighter fit. Without
    // the tie-break the checkpoint freezes at the first epoch that
    // saturates F1, keeping needlessly noisy weights.
    bool beats(const Checkpoint& other) const {
        if (!other.set) return set;
        return val_macro_f1 > other.val_macro_f1 ||
               (val_macro_f1 == other.val_macro_f1 && train_loss < other.train_loss);
    }
};

double validation_macro_f1(const std::vector<double>& weights, double bias,
                           const std::vector<SparseVector>& val_x,
                           const std::vector<double>& val_y, double threshold) {
    std::vector<Label> preds;
    std::vector<Label> truth;
    preds.reserve(val_x.size());
    truth.reserve(val_x.size());
    for (size_t k = 0; k < val_x.size(); ++k) {
        preds.push_back(binarize(val_x[k].dot(weights) + bias, threshold));
        truth.push_back(binarize(val_y[k], threshold));
    }
    return metrics::macro_average(metrics::prf(metrics::confusion(preds, truth))).f1;
}

}  // namespace

TrainResult train_regressor(const std::vector<LabeledExample>& train,
                            const std::vector<LabeledExample>& val,
                            const FeatureExtractor& fx, const TrainConfig& cfg) {
    cfg.validate();
    if (train.empty()) throw Error("bad_config", "training set is empty");
    for (const LabeledExample& e : train) {
        if (e.target < 0.0 || e.target > 5.0) {
            throw Error("bad_config", "score outside [0, 5] for doc " + e.doc_id);
        }
    }
    if (fx.kind != FeatureExtractor::Kind::hashed_char_ngrams) {
        throw Error("bad_config",
                    "training runs on the hashed extractor; precompute features "
                    "into hashed form or score externally");
    }

    TrainResult result;

    // Frozen backbone: extract every feature vector once, up front.
    const size_t n = train.size();
    std::vector<SparseVector> train_x(n);
    std::vector<double> train_y(n);
    for (size_t k = 0; k < n; ++k) {
        train_x[k] = extract_features(train[k].text, fx);
        train_y[k] = train[k].target;
    }
    std::vector<SparseVector> val_x(val.size());
    std::vector<double> val_y(val.size());
    for (size_t k = 0; k < val.size(); ++k) {
        val_x[k] = extract_features(val[k].text, fx);
        val_y[k] = val[k].target;
    }

    std::vector<double> grid = cfg.lr_grid;
    if (grid.empty()) grid = {cfg.learning_rate};
    const bool have_val = !val.empty();
    if (!have_val) {
        result.warnings.push_back(
            "validation set empty: checkpoint selection disabled, keeping the "
            "final epoch at the configured learning rate");
        grid = {cfg.learning_rate};
    }

    const double threshold = 3.0;  // standard cut point for checkpointing
    const double target_mean =
        std::accumulate(train_y.begin(), train_y.end(), 0.0) /
        static_cast<double>(n);
    const uint32_t dim = fx.output_dimension();

    Checkpoint best;
    std::vector<double> weights;
    for (double lr : grid) {
        TrainingCurve curve;
        curve.learning_rate = lr;
        // Checkpoints stay rate-local until the rate survives every epoch;
        // a rate that later blows up forfeits its early epochs too.
        Checkpoint rate_best;

        weights.assign(dim, 0.0);
        // Bias starts at the target mean so early epochs spend their steps
        // on shape, not on closing a constant offset.
        double bias = target_mean;

        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);

        for (uint32_t epoch = 1; epoch <= cfg.epochs && !curve.diverged; ++epoch) {
            // Same deterministic batch order for every grid rate, so curves
            // differ only by the rate itself.
            uint64_t state = cfg.seed ^ (0x65706F6368ULL + epoch);
            for (size_t i = n - 1; i > 0; --i) {
                const size_t j = static_cast<size_t>(splitmix64(state) % (i + 1));
                std::swap(order[i], order[j]);
            }

            double squared_residual_sum = 0.0;
            std::vector<double> r;
            for (size_t batch_start = 0; batch_start < n;
                 batch_start += cfg.batch_size) {
                const size_t m = std::min(cfg.batch_size, n - batch_start);
                // Residuals before the update, then one batch-mean step.
                r.resize(m);
                for (size_t k = 0; k < m; ++k) {
                    const SparseVector& xv = train_x[order[batch_start + k]];
                    r[k] = xv.dot(weights) + bias - train_y[order[batch_start + k]];
                    squared_residual_sum += r[k] * r[k];
                }
                const double scale = 2.0 * lr / static_cast<double>(m);
                for (size_t k = 0; k < m; ++k) {
                    const SparseVector& xv = train_x[order[batch_start + k]];
                    const double coeff = scale * r[k];
                    for (size_t j = 0; j < xv.indices.size(); ++j) {
                        weights[xv.indices[j]] -= coeff * xv.values[j];
                    }
                    bias -= coeff;
                }
            }
            const double train_loss =
                squared_residual_sum / static_cast<double>(n);
            if (!std::isfinite(train_loss)) {
                curve.diverged = true;
                curve.points.push_back({epoch, train_loss, 0.0});
                break;
            }

            double val_f1 = 0.0;
            if (have_val) {
                val_f1 = validation_macro_f1(weights, bias, val_x, val_y, threshold);
                Checkpoint candidate;
                candidate.set = true;
                candidate.val_macro_f1 = val_f1;
                candidate.train_loss = train_loss;
                candidate.learning_rate = lr;
                candidate.epoch = epoch;
                if (candidate.beats(rate_best)) {
                    candidate.weights = weights;
                    candidate.bias = bias;
                    rate_best = std::move(candidate);
                }
            } else if (epoch == cfg.epochs) {
                rate_best.set = true;
                rate_best.weights = weights;
                rate_best.bias = bias;
                rate_best.val_macro_f1 = 0.0;
                rate_best.train_loss = train_loss;
                rate_best.learning_rate = lr;
                rate_best.epoch = epoch;
            }
            curve.points.push_back({epoch, train_loss, val_f1});
        }
        if (!curve.diverged && rate_best.set && rate_best.beats(best)) {
            best = std::move(rate_best);
        }
        result.curves.push_back(std::move(curve));
    }

    if (!best.set) {
        throw Error("non_finite_loss",
                    "every learning rate diverged; lower the rates or check the "
                    "feature scale");
    }

    result.model.extractor = fx;
    result.model.weights = std::move(best.weights);
    result.model.bias = best.bias;
    result.model.threshold = threshold;
    result.model.training_meta.epochs = cfg.epochs;
    result.model.training_meta.learning_rate = best.learning_rate;
    result.model.training_meta.seed = cfg.seed;
    result.model.training_meta.best_epoch = best.epoch;
    result.model.training_meta.best_val_macro_f1 = best.val_macro_f1;
    result.chosen_learning_rate = best.learning_rate;
    result.chosen_epoch = best.epoch;
    return result;
}

void save_training_curves(const std::string& path,
                          const std::vector<TrainingCurve>& curves) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("io", "cannot open for writing: " + path);
    for (const TrainingCurve& curve : curves) {
        for (const EpochPoint& p : curve.points) {
            nlohmann::ordered_json j;
            j["learning_rate"] = curve.learning_rate;
            j["epoch"] = p.epoch;
            j["train_loss"] = p.train_loss;
            j["val_macro_f1"] = p.val_macro_f1;
            j["diverged"] = curve.diverged && p.epoch == curve.points.back().epoch;
            out << j.dump() << "\n";
        }
    }
    if (!out) throw Error("io", "cannot write curves: " + path);
}

std::vector<TrainingCurve> load_training_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open curves: " + path);
    std::vector<TrainingCurve> curves;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw Error("malformed_record", "bad curve line");
        const double lr = j.at("learning_rate").get<double>();
        if (curves.empty() || curves.back().learning_rate != lr) {
            curves.push_back({lr, false, {}});
        }
        // Non-finite losses (diverged epochs) serialize as null.
        const nlohmann::json& loss = j.at("train_loss");
        curves.back().points.push_back(
            {j.at("epoch").get<uint32_t>(),
             loss.is_null() ? std::numeric_limits<double>::infinity()
                            : loss.get<double>(),
             j.at("val_macro_f1").get<double>()});
        if (j.value("diverged", false)) curves.back().diverged = true;
    }
    return curves;
}

}  // namespace curate::quality
