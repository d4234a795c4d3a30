#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace curate {

// One corpus record. Immutable by convention once constructed; stages copy
// rather than mutate in place.
struct Document {
    std::string id;        // unique within one corpus file set, non-empty
    std::string source;    // source-collection name, e.g. "news", "blog"
    std::string domain;    // registrable domain, lowercase, may be empty
    std::string text;      // UTF-8 body
    std::optional<int64_t> timestamp;  // seconds since epoch
    std::map<std::string, std::string> meta;

    // Absent timestamps order as 0 so dedup winner selection stays total.
    int64_t effective_timestamp() const { return timestamp.value_or(0); }
};

enum class Stage {
    safety,
    cleaning,
    heuristic,
    basic_quality,
    dedup,
    hq_classifier,
};

const char* stage_name(Stage s);

// Outcome of one stage for one document.
struct FilterVerdict {
    Stage stage = Stage::safety;
    bool pass = true;
    std::string reason;  // machine-readable code, non-empty when pass=false
    std::optional<double> score;  // scoring stages only

    static FilterVerdict passed(Stage s) {
        FilterVerdict v;
        v.stage = s;
        return v;
    }
    static FilterVerdict failed(Stage s, std::string why) {
        FilterVerdict v;
        v.stage = s;
        v.pass = false;
        v.reason = std::move(why);
        return v;
    }
};

// One quality score assigned to one document by one scoring source.
struct AnnotationRecord {
    std::string doc_id;
    int score = 0;  // integer in [0, 5]
    std::string annotator;
    std::optional<std::string> raw_response;
};

// Binary quality label; positive = high quality.
enum class Label { negative, positive };

}  // namespace curate
