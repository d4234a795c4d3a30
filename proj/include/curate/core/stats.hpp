#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace curate {

struct StageStats {
    uint64_t documents_in = 0;
    uint64_t documents_out = 0;
    uint64_t bytes_in = 0;
    uint64_t bytes_out = 0;
    std::map<std::string, uint64_t> removal_reasons;
};

// Per-run counters, one entry per stage in execution order.
struct CorpusStats {
    std::vector<std::pair<std::string, StageStats>> stages;

    // Returns the stage entry, appending it on first use.
    StageStats& stage(const std::string& name);
    const StageStats* find(const std::string& name) const;

    // Every document must be accounted for: documents_out <= documents_in
    // and the removal-reason histogram sums to the difference. Returns false
    // and fills why on the first violated stage.
    bool reconciles(std::string* why = nullptr) const;

    // Aligned text report: stage table followed by the reason histogram.
    std::string render() const;
};

}  // namespace curate
