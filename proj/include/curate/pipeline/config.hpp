#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curate/dedup/minhash.hpp"
#include "curate/heuristics/rules.hpp"
#include "curate/ingest/clean.hpp"

namespace curate::pipeline {

// Enable flags for the fixed stage order:
//   ingest -> safety -> clean -> heuristics -> basic_quality -> dedup ->
//   hq_score -> hq_threshold -> emit
// Stages may be switched off but never reordered; ingest and emit always run.
struct StageToggles {
    bool safety = true;
    bool clean = true;
    bool heuristics = true;
    bool basic_quality = true;
    bool dedup = true;
    bool hq_score = true;
    bool hq_threshold = true;
};

struct PipelinePaths {
    std::vector<std::string> inputs;  // glob patterns
    std::string output_dir;
    std::string blocklist;            // required when safety is on
    std::string basic_quality_model;  // required when basic_quality is on
    std::string hq_model;             // required when hq_score/hq_threshold is on
    std::string signature_cache;      // optional; reused when its header matches
};

struct PipelineConfig {
    PipelinePaths paths;
    StageToggles stages;
    dedup::DedupConfig dedup;
    heuristics::HeuristicRuleSet heuristics;
    ingest::ParserRules parser_rules;
    double basic_quality_pass_threshold = 0.5;
    double hq_threshold = 3.0;
    uint64_t seed = 0;
    size_t workers = 1;
};

// JSON config file with one section per concern (paths, stages, dedup,
// heuristics, parser_rules, quality, seed, workers). Every section is
// optional; unknown keys are rejected so typos fail loudly. Throws
// Error("bad_config") / Error("unreadable_file").
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text, const std::string& origin);

// Hash of the canonical serialized config (16 hex chars). Semantically equal
// configs hash equal regardless of file formatting.
std::string config_hash(const PipelineConfig& cfg);

// Sorted unique matches across all patterns. A pattern matching nothing is
// reported in `unmatched` when given, otherwise ignored.
std::vector<std::string> expand_globs(const std::vector<std::string>& patterns,
                                      std::vector<std::string>* unmatched = nullptr);

// Structural checks plus existence of every referenced path; runs before any
// processing starts. Throws Error("bad_config").
void validate_config(const PipelineConfig& cfg);

}  // namespace curate::pipeline
