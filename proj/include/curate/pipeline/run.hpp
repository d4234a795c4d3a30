#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "curate/core/stats.hpp"
#include "curate/pipeline/config.hpp"

namespace curate::pipeline {

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

// Completed-run record, written beside the outputs only after every output
// file is in place. Its presence marks a finished run; a crashed or aborted
// run leaves none.
struct RunManifest {
    std::string tool_version;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    CorpusStats stats;
    std::vector<StageTiming> timings;
    uint64_t documents_kept = 0;
    uint64_t documents_rejected = 0;
    std::string kept_path;
    std::string rejects_path;
    std::string kept_digest;
    std::string rejects_digest;
};

struct RunResult {
    RunManifest manifest;
    std::string manifest_path;
};

// Runs the enabled stages in their fixed order over all input files.
// Outputs under cfg.paths.output_dir:
//   kept.jsonl     surviving documents in id order
//   rejects.jsonl  one record per removed document: stage, reason, score
//                  when present, and the full document
//   manifest.json  the RunManifest, written last
// Deterministic for fixed (config, inputs, seed) regardless of worker count.
// Any fatal error propagates and leaves no manifest.
RunResult run_pipeline(const PipelineConfig& cfg);

// Digest used for manifest input/output entries (16 hex chars over raw file
// bytes). Throws Error("unreadable_file").
std::string file_digest(const std::string& path);

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace curate::pipeline
