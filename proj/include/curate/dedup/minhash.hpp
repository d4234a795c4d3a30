#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curate::dedup {

struct DedupConfig {
    size_t shingle_n = 5;   // character n-gram size
    size_t num_perm = 128;  // K: signature length
    size_t bands = 16;      // B
    size_t rows = 8;        // R; B*R must equal K
    double similarity_threshold = 0.70;  // tau in (0, 1]
    uint64_t seed = 0;
    // Verify candidate pairs with exact Jaccard over shingle hashes instead
    // of the signature estimate. Costs memory; meant for small corpora.
    bool exact_verify = false;

    void validate() const;  // throws Error("bad_config") on violations
};

struct DedupSignature {
    std::string doc_id;
    std::vector<uint64_t> values;  // length num_perm; empty = no shingles
    uint64_t seed = 0;
};

// All distinct character n-grams of text (by Unicode scalar), sorted. Text
// shorter than n yields {text} when non-empty, otherwise the empty set.
std::vector<std::string> shingle(std::string_view text, size_t n);

// values[i] = min over shingles of the i-th hash. Throws
// Error("empty_document") on an empty shingle set.
DedupSignature minhash_signature(const std::vector<std::string>& shingles,
                                 const DedupConfig& cfg);

// Equivalent to minhash_signature(shingle(text, cfg.shingle_n), cfg) without
// materializing the shingle strings.
DedupSignature signature_of_text(std::string_view text, const DedupConfig& cfg);

// Fraction of agreeing positions. Throws Error("incompatible_signatures")
// on mismatched length or seed.
double estimate_jaccard(const DedupSignature& a, const DedupSignature& b);

// One key per band; equal row slices within the same band produce equal
// keys, and keys from different bands never collide by construction alone.
std::vector<uint64_t> lsh_band_keys(const DedupSignature& sig,
                                    const DedupConfig& cfg);

// Per-slot hash seeds derived from the config seed; exposed for the
// signature cache header and for tests.
std::vector<uint64_t> slot_seeds(uint64_t seed, size_t k);

}  // namespace curate::dedup
