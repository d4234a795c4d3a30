#pragma once

#include <map>
#include <string>
#include <vector>

#include "curate/core/document.hpp"
#include "curate/dedup/minhash.hpp"

namespace curate::dedup {

// Near-duplicate clusters over one corpus. Singletons included; members and
// clusters sorted for deterministic output.
struct DuplicateClusters {
    std::vector<std::vector<std::string>> clusters;  // member ids, sorted
    std::map<std::string, std::string> winner_of;    // doc id -> winner id
};

struct DedupResult {
    std::vector<Document> kept;  // cluster winners, canonical id order
    DuplicateClusters clusters;
    std::map<std::string, FilterVerdict> removed;  // reason "dup_of:<id>"
    std::vector<std::string> warnings;
};

// Signatures for every document, aligned with docs; empty-text documents get
// a signature with empty values (they cannot be shingled).
std::vector<DedupSignature> compute_signatures(const std::vector<Document>& docs,
                                               const DedupConfig& cfg);

// Two passes: signatures + band keys, then candidate verification and
// union-find clustering. Winner per cluster is minimal under
// (effective timestamp, id); everything else is removed with reason
// "dup_of:<winner>". Empty-text documents pass through with a warning.
DedupResult dedup_corpus(const std::vector<Document>& docs, const DedupConfig& cfg);

// Same, with precomputed signatures (e.g. from the signature cache). sigs
// must align with docs by position and doc id.
DedupResult dedup_corpus(const std::vector<Document>& docs,
                         const std::vector<DedupSignature>& sigs,
                         const DedupConfig& cfg);

}  // namespace curate::dedup
