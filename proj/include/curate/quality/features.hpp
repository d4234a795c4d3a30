#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curate/core/document.hpp"

namespace curate::quality {

// Fixed (never trained) feature source feeding the regression head. The
// hashed kind derives everything from the text; the precomputed kind looks
// vectors up in a sidecar file so externally computed embeddings can slot
// in behind the same interface.
struct FeatureExtractor {
    enum class Kind { hashed_char_ngrams, precomputed_embeddings };
    Kind kind = Kind::hashed_char_ngrams;

    // hashed_char_ngrams
    std::vector<uint32_t> ngram_sizes = {1, 2, 3};
    uint32_t dimension = 1u << 18;
    uint64_t hash_seed = 0;

    // precomputed_embeddings
    std::string embedding_path;
    uint32_t embedding_dimension = 0;

    uint32_t output_dimension() const {
        return kind == Kind::hashed_char_ngrams ? dimension : embedding_dimension;
    }
};

// Sparse vector with sorted unique indices. Dense vectors (precomputed
// embeddings) use indices 0..dim-1.
struct SparseVector {
    std::vector<uint32_t> indices;
    std::vector<double> values;

    double dot(const std::vector<double>& dense) const;
    double norm() const;
    void scale(double a);
};

// Sidecar table for precomputed embeddings: one record per line with an id
// and a fixed-dimension vector.
class EmbeddingTable {
  public:
    EmbeddingTable() = default;
    static EmbeddingTable load(const std::string& path, uint32_t dimension);
    const std::vector<double>* find(const std::string& doc_id) const;
    size_t size() const { return vectors_.size(); }

  private:
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Hashed char {1,2,3}-gram counts folded into `dimension` buckets and
// L2-normalized. Deterministic; empty text gives the zero vector.
SparseVector extract_features(std::string_view text, const FeatureExtractor& fx);

// Document-level extraction; required for precomputed embeddings, which are
// keyed by doc id. Throws Error("missing_embedding") when absent.
SparseVector extract_features(const Document& doc, const FeatureExtractor& fx,
                              const EmbeddingTable* embeddings = nullptr);

}  // namespace curate::quality
