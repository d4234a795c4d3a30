#pragma once

#include <string>
#include <vector>

#include "curate/dedup/minhash.hpp"

namespace curate::dedup {

// Binary signature cache. The header is versioned by (num_perm, seed,
// shingle_n); loading against a config with different values throws
// Error("cache_mismatch") so a stale cache can never poison a run.
void write_signature_cache(const std::string& path, const DedupConfig& cfg,
                           const std::vector<DedupSignature>& sigs);

std::vector<DedupSignature> read_signature_cache(const std::string& path,
                                                 const DedupConfig& cfg);

}  // namespace curate::dedup
