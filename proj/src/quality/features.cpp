#include "curate/quality/features.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "curate/error.hpp"
#include "curate/hash.hpp"
#include "curate/kernels/simd.hpp"
#include "curate/utf8.hpp"

namespace curate::quality {

double SparseVector::dot(const std::vector<double>& dense) const {
    return kernels::active().sparse_dot(indices.data(), values.data(),
                                        indices.size(), dense.data());
}

double SparseVector::norm() const {
    return std::sqrt(kernels::active().sum_sq(values.data(), values.size()));
}

void SparseVector::scale(double a) {
    kernels::active().scale(values.data(), values.size(), a);
}

EmbeddingTable EmbeddingTable::load(const std::string& path, uint32_t dimension) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open embeddings: " + path);
    EmbeddingTable table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
            !j.contains("embedding") || !j["embedding"].is_array()) {
            throw Error("malformed_record", "bad embedding record at " + path +
                                                ":" + std::to_string(line_no));
        }
        std::vector<double> vec = j["embedding"].get<std::vector<double>>();
        if (vec.size() != dimension) {
            throw Error("malformed_record",
                        "embedding dimension mismatch at " + path + ":" +
                            std::to_string(line_no));
        }
        table.vectors_[j["id"].get<std::string>()] = std::move(vec);
    }
    return table;
}

const std::vector<double>* EmbeddingTable::find(const std::string& doc_id) const {
    auto it = vectors_.find(doc_id);
    return it == vectors_.end() ? nullptr : &it->second;
}

namespace {

// LSD radix sort; only worth it because bucket lists run to a few thousand
// entries per document.
void radix_sort(std::vector<uint32_t>& v, uint32_t max_value) {
    const int bits = std::bit_width(max_value);
    std::vector<uint32_t> tmp(v.size());
    std::array<uint32_t, 257> cnt;
    for (int shift = 0; shift < bits; shift += 8) {
        cnt.fill(0);
        for (const uint32_t x : v) ++cnt[((x >> shift) & 0xFF) + 1];
        for (int i = 0; i < 256; ++i) cnt[i + 1] += cnt[i];
        for (const uint32_t x : v) tmp[cnt[(x >> shift) & 0xFF]++] = x;
        v.swap(tmp);
    }
}

}  // namespace

SparseVector extract_features(std::string_view text, const FeatureExtractor& fx) {
    if (fx.kind != FeatureExtractor::Kind::hashed_char_ngrams) {
        throw Error("bad_config",
                    "text-only extraction requires the hashed extractor");
    }
    SparseVector out;
    if (text.empty()) return out;

    std::vector<size_t> offsets;
    offsets.reserve(text.size() + 1);
    size_t pos = 0;
    while (pos < text.size()) {
        offsets.push_back(pos);
        utf8::decode(text, pos);
    }
    offsets.push_back(text.size());
    const size_t chars = offsets.size() - 1;

    // Hash each n-gram's byte span, bucket, then fold counts with one sort
    // over the occupied buckets.
    std::vector<uint32_t> buckets;
    for (uint32_t n : fx.ngram_sizes) {
        if (n == 0 || chars < n) continue;
        buckets.reserve(buckets.size() + (chars - n + 1));
        const uint64_t seed = fx.hash_seed ^ n;
        for (size_t i = 0; i + n <= chars; ++i) {
            const uint64_t h =
                hash64(text.substr(offsets[i], offsets[i + n] - offsets[i]), seed);
            buckets.push_back(static_cast<uint32_t>(h % fx.dimension));
        }
    }
    if (buckets.empty()) return out;

    radix_sort(buckets, fx.dimension - 1);
    out.indices.reserve(64);
    out.values.reserve(64);
    for (const uint32_t idx : buckets) {
        if (!out.indices.empty() && out.indices.back() == idx) {
            out.values.back() += 1.0;
        } else {
            out.indices.push_back(idx);
            out.values.push_back(1.0);
        }
    }

    const double norm = out.norm();
    if (norm > 0.0) out.scale(1.0 / norm);
    return out;
}

SparseVector extract_features(const Document& doc, const FeatureExtractor& fx,
                              const EmbeddingTable* embeddings) {
    if (fx.kind == FeatureExtractor::Kind::hashed_char_ngrams) {
        return extract_features(doc.text, fx);
    }
    if (embeddings == nullptr) {
        throw Error("missing_embedding", "no embedding table loaded");
    }
    const std::vector<double>* vec = embeddings->find(doc.id);
    if (vec == nullptr) {
        throw Error("missing_embedding", "no embedding for doc " + doc.id);
    }
    SparseVector out;
    out.indices.resize(vec->size());
    for (size_t i = 0; i < vec->size(); ++i) {
        out.indices[i] = static_cast<uint32_t>(i);
    }
    out.values = *vec;
    return out;
}

}  // namespace curate::quality
