#include "curate/quality/model.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "curate/error.hpp"

namespace curate::quality {

Prediction predict_score(const QualityModel& model, const SparseVector& features) {
    Prediction p;
    p.raw = features.dot(model.weights) + model.bias;
    p.clamped = std::clamp(p.raw, 0.0, 5.0);
    return p;
}

Prediction predict_score(const QualityModel& model, const Document& doc,
                         const EmbeddingTable* embeddings) {
    return predict_score(model, extract_features(doc, model.extractor, embeddings));
}

Label binarize(double score, double threshold) {
    return score >= threshold ? Label::positive : Label::negative;
}

namespace {

constexpr char kMagic[8] = {'C', 'U', 'R', 'M', 'D', 'L', '0', '1'};

#pragma pack(push, 1)
struct ModelHeader {
    char magic[8];
    uint32_t extractor_kind;   // FeatureExtractor::Kind
    uint32_t dimension;        // weight vector length
    uint64_t hash_seed;
    uint32_t ngram_count;      // hashed kind: number of n-gram sizes
    uint32_t ngram_sizes[8];   // zero-padded
    double threshold;
    double bias;
    uint32_t meta_epochs;
    uint32_t meta_best_epoch;
    double meta_learning_rate;
    double meta_best_val_macro_f1;
    uint64_t meta_seed;
};
#pragma pack(pop)
static_assert(sizeof(ModelHeader) == 108, "model header layout drifted");

}  // namespace

void save_model(const std::string& path, const QualityModel& model) {
    if (model.weights.size() != model.extractor.output_dimension()) {
        throw Error("bad_config", "weight length does not match extractor dimension");
    }
    if (model.extractor.ngram_sizes.size() > 8) {
        throw Error("bad_config", "at most 8 n-gram sizes are supported");
    }
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot open for writing: " + tmp);

    ModelHeader h{};
    std::memcpy(h.magic, kMagic, sizeof(kMagic));
    h.extractor_kind = static_cast<uint32_t>(model.extractor.kind);
    h.dimension = model.extractor.output_dimension();
    h.hash_seed = model.extractor.hash_seed;
    h.ngram_count = static_cast<uint32_t>(model.extractor.ngram_sizes.size());
    for (size_t i = 0; i < model.extractor.ngram_sizes.size(); ++i) {
        h.ngram_sizes[i] = model.extractor.ngram_sizes[i];
    }
    h.threshold = model.threshold;
    h.bias = model.bias;
    h.meta_epochs = model.training_meta.epochs;
    h.meta_best_epoch = model.training_meta.best_epoch;
    h.meta_learning_rate = model.training_meta.learning_rate;
    h.meta_best_val_macro_f1 = model.training_meta.best_val_macro_f1;
    h.meta_seed = model.training_meta.seed;

    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(model.weights.data()),
              static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    out.close();
    if (out.fail() || std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("io", "cannot write model: " + path);
    }
}

QualityModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("unreadable_file", "cannot open model: " + path);

    ModelHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("model_format", "not a model file (or unsupported version): " + path);
    }
    if (h.extractor_kind > 1 || h.ngram_count > 8 || h.dimension == 0) {
        throw Error("model_format", "corrupt model header: " + path);
    }

    QualityModel model;
    model.extractor.kind = static_cast<FeatureExtractor::Kind>(h.extractor_kind);
    if (model.extractor.kind == FeatureExtractor::Kind::hashed_char_ngrams) {
        model.extractor.dimension = h.dimension;
    } else {
        model.extractor.embedding_dimension = h.dimension;
    }
    model.extractor.hash_seed = h.hash_seed;
    model.extractor.ngram_sizes.assign(h.ngram_sizes, h.ngram_sizes + h.ngram_count);
    model.threshold = h.threshold;
    model.bias = h.bias;
    model.training_meta.epochs = h.meta_epochs;
    model.training_meta.best_epoch = h.meta_best_epoch;
    model.training_meta.learning_rate = h.meta_learning_rate;
    model.training_meta.best_val_macro_f1 = h.meta_best_val_macro_f1;
    model.training_meta.seed = h.meta_seed;

    model.weights.resize(h.dimension);
    in.read(reinterpret_cast<char*>(model.weights.data()),
            static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    if (!in || in.gcount() !=
                   static_cast<std::streamsize>(model.weights.size() * sizeof(double))) {
        throw Error("model_format", "truncated model file: " + path);
    }
    return model;
}

}  // namespace curate::quality
