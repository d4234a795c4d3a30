#include "curate/dedup/minhash.hpp"

#include <algorithm>
#include <limits>

#include "curate/error.hpp"
#include "curate/hash.hpp"
#include "curate/kernels/simd.hpp"
#include "curate/utf8.hpp"

namespace curate::dedup {

void DedupConfig::validate() const {
    if (shingle_n < 1) throw Error("bad_config", "shingle_n must be >= 1");
    if (num_perm == 0 || bands == 0 || rows == 0 || bands * rows != num_perm) {
        throw Error("bad_config", "bands * rows must equal num_perm");
    }
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
        throw Error("bad_config", "similarity_threshold must be in (0, 1]");
    }
}

std::vector<uint64_t> slot_seeds(uint64_t seed, size_t k) {
    std::vector<uint64_t> seeds(k);
    uint64_t state = seed;
    for (size_t i = 0; i < k; ++i) seeds[i] = splitmix64(state);
    return seeds;
}

namespace {

// Calls fn(base_hash) for every length-n scalar window of text; short
// non-empty text yields one window covering the whole string. Duplicate
// windows are fine for minima, so no set is built.
template <typename Fn>
void for_each_window_hash(std::string_view text, size_t n, uint64_t seed, Fn&& fn) {
    if (text.empty()) return;
    std::vector<size_t> offsets;  // byte offset of each scalar
    offsets.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        offsets.push_back(pos);
        utf8::decode(text, pos);
    }
    offsets.push_back(text.size());
    const size_t chars = offsets.size() - 1;
    if (chars < n) {
        fn(hash64(text, seed));
        return;
    }
    for (size_t i = 0; i + n <= chars; ++i) {
        const size_t b = offsets[i];
        const size_t e = offsets[i + n];
        fn(hash64(text.substr(b, e - b), seed));
    }
}

}  // namespace

std::vector<std::string> shingle(std::string_view text, size_t n) {
    std::vector<std::string> grams;
    if (text.empty()) return grams;
    std::vector<size_t> offsets;
    offsets.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        offsets.push_back(pos);
        utf8::decode(text, pos);
    }
    offsets.push_back(text.size());
    const size_t chars = offsets.size() - 1;
    if (chars < n) {
        grams.emplace_back(text);
        return grams;
    }
    grams.reserve(chars - n + 1);
    for (size_t i = 0; i + n <= chars; ++i) {
        grams.emplace_back(text.substr(offsets[i], offsets[i + n] - offsets[i]));
    }
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    return grams;
}

DedupSignature minhash_signature(const std::vector<std::string>& shingles,
                                 const DedupConfig& cfg) {
    cfg.validate();
    if (shingles.empty()) {
        throw Error("empty_document", "cannot sign an empty shingle set");
    }
    const std::vector<uint64_t> seeds = slot_seeds(cfg.seed, cfg.num_perm);
    DedupSignature sig;
    sig.seed = cfg.seed;
    sig.values.assign(cfg.num_perm, std::numeric_limits<uint64_t>::max());
    const auto& k = kernels::active();
    for (const std::string& s : shingles) {
        k.minhash_update(hash64(s, cfg.seed), seeds.data(), sig.values.data(),
                         cfg.num_perm);
    }
    return sig;
}

DedupSignature signature_of_text(std::string_view text, const DedupConfig& cfg) {
    cfg.validate();
    if (text.empty()) {
        throw Error("empty_document", "cannot sign empty text");
    }
    const std::vector<uint64_t> seeds = slot_seeds(cfg.seed, cfg.num_perm);
    DedupSignature sig;
    sig.seed = cfg.seed;
    sig.values.assign(cfg.num_perm, std::numeric_limits<uint64_t>::max());
    const auto& k = kernels::active();
    for_each_window_hash(text, cfg.shingle_n, cfg.seed, [&](uint64_t base) {
        k.minhash_update(base, seeds.data(), sig.values.data(), cfg.num_perm);
    });
    return sig;
}

double estimate_jaccard(const DedupSignature& a, const DedupSignature& b) {
    if (a.values.size() != b.values.size() || a.values.empty() ||
        a.seed != b.seed) {
        throw Error("incompatible_signatures",
                    "signatures differ in length or seed");
    }
    const size_t eq = kernels::active().count_equal_u64(
        a.values.data(), b.values.data(), a.values.size());
    return static_cast<double>(eq) / static_cast<double>(a.values.size());
}

std::vector<uint64_t> lsh_band_keys(const DedupSignature& sig,
                                    const DedupConfig& cfg) {
    cfg.validate();
    if (sig.values.size() != cfg.num_perm) {
        throw Error("incompatible_signatures", "signature length != num_perm");
    }
    std::vector<uint64_t> keys(cfg.bands);
    for (size_t b = 0; b < cfg.bands; ++b) {
        // Band index folded into the hash seed keeps keys from different
        // bands in disjoint families.
        keys[b] = hash64(sig.values.data() + b * cfg.rows,
                         cfg.rows * sizeof(uint64_t), cfg.seed ^ (b + 1));
    }
    return keys;
}

}  // namespace curate::dedup
