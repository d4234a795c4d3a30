#include "curate/dedup/dedup.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "curate/dedup/union_find.hpp"
#include "curate/error.hpp"
#include "curate/hash.hpp"
#include "curate/utf8.hpp"

namespace curate::dedup {

namespace {

// Sorted unique window hashes; proxy for the exact shingle set when
// cfg.exact_verify is on.
std::vector<uint64_t> shingle_hashes(const std::string& text,
                                     const DedupConfig& cfg) {
    std::vector<uint64_t> hashes;
    if (text.empty()) return hashes;
    std::vector<size_t> offsets;
    offsets.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        offsets.push_back(pos);
        utf8::decode(text, pos);
    }
    offsets.push_back(text.size());
    const size_t chars = offsets.size() - 1;
    const std::string_view sv(text);
    if (chars < cfg.shingle_n) {
        hashes.push_back(hash64(sv, cfg.seed));
    } else {
        hashes.reserve(chars - cfg.shingle_n + 1);
        for (size_t i = 0; i + cfg.shingle_n <= chars; ++i) {
            hashes.push_back(hash64(
                sv.substr(offsets[i], offsets[i + cfg.shingle_n] - offsets[i]),
                cfg.seed));
        }
    }
    std::sort(hashes.begin(), hashes.end());
    hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
    return hashes;
}

double exact_jaccard(const std::vector<uint64_t>& a,
                     const std::vector<uint64_t>& b) {
    if (a.empty() && b.empty()) return 0.0;
    size_t i = 0;
    size_t j = 0;
    size_t both = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++both;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const size_t uni = a.size() + b.size() - both;
    return static_cast<double>(both) / static_cast<double>(uni);
}

}  // namespace

std::vector<DedupSignature> compute_signatures(const std::vector<Document>& docs,
                                               const DedupConfig& cfg) {
    cfg.validate();
    std::vector<DedupSignature> sigs(docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].text.empty()) {
            sigs[i].doc_id = docs[i].id;
            sigs[i].seed = cfg.seed;
        } else {
            sigs[i] = signature_of_text(docs[i].text, cfg);
            sigs[i].doc_id = docs[i].id;
        }
    }
    return sigs;
}

DedupResult dedup_corpus(const std::vector<Document>& docs,
                         const DedupConfig& cfg) {
    return dedup_corpus(docs, compute_signatures(docs, cfg), cfg);
}

DedupResult dedup_corpus(const std::vector<Document>& docs,
                         const std::vector<DedupSignature>& sigs,
                         const DedupConfig& cfg) {
    cfg.validate();
    if (sigs.size() != docs.size()) {
        throw Error("signature_mismatch", "signature list does not align with corpus");
    }
    std::unordered_map<std::string, size_t> index_of;
    index_of.reserve(docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        if (sigs[i].doc_id != docs[i].id) {
            throw Error("signature_mismatch",
                        "signature " + sigs[i].doc_id + " does not match document " +
                            docs[i].id);
        }
        if (!index_of.emplace(docs[i].id, i).second) {
            throw Error("duplicate_id", "duplicate document id: " + docs[i].id);
        }
    }

    DedupResult result;

    // Pass 1 output: band key -> member doc indices.
    std::unordered_map<uint64_t, std::vector<uint32_t>> band_groups;
    for (size_t i = 0; i < docs.size(); ++i) {
        if (sigs[i].values.empty()) {
            result.warnings.push_back("empty document passed through: " +
                                      docs[i].id);
            continue;
        }
        for (uint64_t key : lsh_band_keys(sigs[i], cfg)) {
            band_groups[key].push_back(static_cast<uint32_t>(i));
        }
    }

    // Pass 2: verify candidate pairs and build the cluster forest. The final
    // partition is the connected components of the verified-similar graph,
    // so iteration order cannot change the outcome.
    UnionFind uf(docs.size());
    std::unordered_set<uint64_t> checked;
    std::vector<std::vector<uint64_t>> exact_sets;
    if (cfg.exact_verify) exact_sets.resize(docs.size());
    auto exact_set = [&](size_t i) -> const std::vector<uint64_t>& {
        if (exact_sets[i].empty()) exact_sets[i] = shingle_hashes(docs[i].text, cfg);
        return exact_sets[i];
    };
    for (const auto& [key, group] : band_groups) {
        (void)key;
        if (group.size() < 2) continue;
        for (size_t a = 0; a < group.size(); ++a) {
            for (size_t b = a + 1; b < group.size(); ++b) {
                const uint32_t i = std::min(group[a], group[b]);
                const uint32_t j = std::max(group[a], group[b]);
                if (uf.same(i, j)) continue;
                const uint64_t pair_key = (static_cast<uint64_t>(i) << 32) | j;
                if (!checked.insert(pair_key).second) continue;
                const double sim = cfg.exact_verify
                                       ? exact_jaccard(exact_set(i), exact_set(j))
                                       : estimate_jaccard(sigs[i], sigs[j]);
                if (sim >= cfg.similarity_threshold) uf.unite(i, j);
            }
        }
    }

    // Winner per cluster: minimal (effective timestamp, id).
    std::unordered_map<size_t, size_t> winner;  // root -> winning index
    for (size_t i = 0; i < docs.size(); ++i) {
        const size_t root = uf.find(i);
        auto it = winner.find(root);
        if (it == winner.end()) {
            winner.emplace(root, i);
            continue;
        }
        const Document& cur = docs[it->second];
        const Document& cand = docs[i];
        if (cand.effective_timestamp() < cur.effective_timestamp() ||
            (cand.effective_timestamp() == cur.effective_timestamp() &&
             cand.id < cur.id)) {
            it->second = i;
        }
    }

    std::unordered_map<size_t, std::vector<std::string>> members;
    for (size_t i = 0; i < docs.size(); ++i) {
        members[uf.find(i)].push_back(docs[i].id);
    }
    for (auto& [root, ids] : members) {
        std::sort(ids.begin(), ids.end());
        const std::string& win = docs[winner.at(root)].id;
        for (const std::string& id : ids) {
            result.clusters.winner_of[id] = win;
        }
        result.clusters.clusters.push_back(std::move(ids));
    }
    std::sort(result.clusters.clusters.begin(), result.clusters.clusters.end());

    for (size_t i = 0; i < docs.size(); ++i) {
        const std::string& win = result.clusters.winner_of.at(docs[i].id);
        if (win == docs[i].id) {
            result.kept.push_back(docs[i]);
        } else {
            result.removed.emplace(
                docs[i].id,
                FilterVerdict::failed(Stage::dedup, "dup_of:" + win));
        }
    }
    std::sort(result.kept.begin(), result.kept.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    return result;
}

}  // namespace curate::dedup
