#include "curate/core/stats.hpp"

#include <algorithm>
#include <cstdio>

#include "curate/core/document.hpp"

namespace curate {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::safety: return "safety";
        case Stage::cleaning: return "cleaning";
        case Stage::heuristic: return "heuristic";
        case Stage::basic_quality: return "basic_quality";
        case Stage::dedup: return "dedup";
        case Stage::hq_classifier: return "hq_classifier";
    }
    return "unknown";
}

StageStats& CorpusStats::stage(const std::string& name) {
    for (auto& [n, s] : stages) {
        if (n == name) return s;
    }
    stages.emplace_back(name, StageStats{});
    return stages.back().second;
}

const StageStats* CorpusStats::find(const std::string& name) const {
    for (const auto& [n, s] : stages) {
        if (n == name) return &s;
    }
    return nullptr;
}

bool CorpusStats::reconciles(std::string* why) const {
    for (const auto& [name, s] : stages) {
        if (s.documents_out > s.documents_in) {
            if (why) *why = name + ": documents_out exceeds documents_in";
            return false;
        }
        uint64_t removed = 0;
        for (const auto& [reason, count] : s.removal_reasons) {
            (void)reason;
            removed += count;
        }
        if (removed != s.documents_in - s.documents_out) {
            if (why) {
                *why = name + ": removal reasons sum to " + std::to_string(removed) +
                       ", expected " +
                       std::to_string(s.documents_in - s.documents_out);
            }
            return false;
        }
    }
    return true;
}

std::string CorpusStats::render() const {
    std::string out;
    char buf[256];
    size_t name_w = 5;
    for (const auto& [name, s] : stages) {
        (void)s;
        name_w = std::max(name_w, name.size());
    }
    std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %14s %14s\n",
                  static_cast<int>(name_w), "stage", "docs_in", "docs_out",
                  "bytes_in", "bytes_out");
    out += buf;
    for (const auto& [name, s] : stages) {
        std::snprintf(buf, sizeof(buf), "%-*s %12llu %12llu %14llu %14llu\n",
                      static_cast<int>(name_w), name.c_str(),
                      static_cast<unsigned long long>(s.documents_in),
                      static_cast<unsigned long long>(s.documents_out),
                      static_cast<unsigned long long>(s.bytes_in),
                      static_cast<unsigned long long>(s.bytes_out));
        out += buf;
    }
    bool any_reason = false;
    for (const auto& [name, s] : stages) {
        for (const auto& [reason, count] : s.removal_reasons) {
            if (!any_reason) {
                out += "\nremovals by reason:\n";
                any_reason = true;
            }
            std::snprintf(buf, sizeof(buf), "  %s/%s: %llu\n", name.c_str(),
                          reason.c_str(), static_cast<unsigned long long>(count));
            out += buf;
        }
    }
    return out;
}

}  // namespace curate
