#include "curate/pipeline/config.hpp"

#include <glob.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/stat.h>

#include <nlohmann/json.hpp>

#include "curate/error.hpp"
#include "curate/hash.hpp"

namespace curate::pipeline {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& section) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (allowed.count(it.key()) == 0) {
            throw Error("bad_config",
                        "unknown key \"" + it.key() + "\" in " + section);
        }
    }
}

json require_object(const json& j, const std::string& section) {
    if (!j.is_object()) {
        throw Error("bad_config", section + " must be an object");
    }
    return j;
}

template <typename T>
void get_to(const json& j, const char* key, T& out, const std::string& section) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception&) {
        throw Error("bad_config",
                    "bad value for \"" + std::string(key) + "\" in " + section);
    }
}

void parse_paths(const json& j, PipelinePaths& out) {
    require_object(j, "paths");
    check_keys(j,
               {"inputs", "output_dir", "blocklist", "basic_quality_model",
                "hq_model", "signature_cache"},
               "paths");
    get_to(j, "inputs", out.inputs, "paths");
    get_to(j, "output_dir", out.output_dir, "paths");
    get_to(j, "blocklist", out.blocklist, "paths");
    get_to(j, "basic_quality_model", out.basic_quality_model, "paths");
    get_to(j, "hq_model", out.hq_model, "paths");
    get_to(j, "signature_cache", out.signature_cache, "paths");
}

void parse_stages(const json& j, StageToggles& out) {
    require_object(j, "stages");
    check_keys(j,
               {"safety", "clean", "heuristics", "basic_quality", "dedup",
                "hq_score", "hq_threshold"},
               "stages");
    get_to(j, "safety", out.safety, "stages");
    get_to(j, "clean", out.clean, "stages");
    get_to(j, "heuristics", out.heuristics, "stages");
    get_to(j, "basic_quality", out.basic_quality, "stages");
    get_to(j, "dedup", out.dedup, "stages");
    get_to(j, "hq_score", out.hq_score, "stages");
    get_to(j, "hq_threshold", out.hq_threshold, "stages");
}

void parse_dedup(const json& j, dedup::DedupConfig& out) {
    require_object(j, "dedup");
    check_keys(j,
               {"shingle_n", "num_perm", "bands", "rows",
                "similarity_threshold", "seed", "exact_verify"},
               "dedup");
    get_to(j, "shingle_n", out.shingle_n, "dedup");
    get_to(j, "num_perm", out.num_perm, "dedup");
    get_to(j, "bands", out.bands, "dedup");
    get_to(j, "rows", out.rows, "dedup");
    get_to(j, "similarity_threshold", out.similarity_threshold, "dedup");
    get_to(j, "seed", out.seed, "dedup");
    get_to(j, "exact_verify", out.exact_verify, "dedup");
}

void parse_heuristics(const json& j, heuristics::HeuristicRuleSet& out) {
    require_object(j, "heuristics");
    check_keys(j,
               {"min_chars", "max_chars", "max_duplicate_line_fraction",
                "max_top_ngram_char_fraction", "max_symbol_fraction",
                "min_cjk_or_alnum_fraction", "mean_line_len_min",
                "mean_line_len_max"},
               "heuristics");
    get_to(j, "min_chars", out.min_chars, "heuristics");
    get_to(j, "max_chars", out.max_chars, "heuristics");
    get_to(j, "max_duplicate_line_fraction", out.max_duplicate_line_fraction,
           "heuristics");
    get_to(j, "max_top_ngram_char_fraction", out.max_top_ngram_char_fraction,
           "heuristics");
    get_to(j, "max_symbol_fraction", out.max_symbol_fraction, "heuristics");
    get_to(j, "min_cjk_or_alnum_fraction", out.min_cjk_or_alnum_fraction,
           "heuristics");
    get_to(j, "mean_line_len_min", out.mean_line_len_min, "heuristics");
    get_to(j, "mean_line_len_max", out.mean_line_len_max, "heuristics");
}

void parse_parser_rules(const json& j, ingest::ParserRules& out) {
    require_object(j, "parser_rules");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string section = "parser_rules." + it.key();
        const json& r = require_object(it.value(), section);
        check_keys(r, {"min_line_chars", "line_filters"}, section);
        ingest::ParserRule rule;
        rule.source = it.key();
        get_to(r, "min_line_chars", rule.min_line_chars, section);
        if (r.contains("line_filters")) {
            if (!r.at("line_filters").is_array()) {
                throw Error("bad_config", section + ".line_filters must be a list");
            }
            for (const json& f : r.at("line_filters")) {
                require_object(f, section + ".line_filters[]");
                check_keys(f, {"kind", "pattern"}, section + ".line_filters[]");
                ingest::LineFilter filter;
                std::string kind = "substring";
                get_to(f, "kind", kind, section);
                if (kind == "substring") {
                    filter.kind = ingest::LineFilter::Kind::substring;
                } else if (kind == "prefix") {
                    filter.kind = ingest::LineFilter::Kind::prefix;
                } else {
                    throw Error("bad_config",
                                section + ": unknown line filter kind \"" + kind +
                                    "\"");
                }
                get_to(f, "pattern", filter.pattern, section);
                rule.line_filters.push_back(std::move(filter));
            }
        }
        out.by_source[it.key()] = std::move(rule);
    }
}

void parse_quality(const json& j, PipelineConfig& out) {
    require_object(j, "quality");
    check_keys(j, {"basic_quality_pass_threshold", "hq_threshold"}, "quality");
    get_to(j, "basic_quality_pass_threshold", out.basic_quality_pass_threshold,
           "quality");
    get_to(j, "hq_threshold", out.hq_threshold, "quality");
}

bool path_exists(const std::string& path) {
    struct stat st;
    return ::stat(path.c_str(), &st) == 0;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("bad_config", origin + ": not a JSON object");
    }
    check_keys(j,
               {"paths", "stages", "dedup", "heuristics", "parser_rules",
                "quality", "seed", "workers"},
               origin);
    PipelineConfig cfg;
    if (j.contains("paths")) parse_paths(j.at("paths"), cfg.paths);
    if (j.contains("stages")) parse_stages(j.at("stages"), cfg.stages);
    if (j.contains("dedup")) parse_dedup(j.at("dedup"), cfg.dedup);
    if (j.contains("heuristics")) parse_heuristics(j.at("heuristics"), cfg.heuristics);
    if (j.contains("parser_rules")) {
        parse_parser_rules(j.at("parser_rules"), cfg.parser_rules);
    }
    if (j.contains("quality")) parse_quality(j.at("quality"), cfg);
    get_to(j, "seed", cfg.seed, origin);
    get_to(j, "workers", cfg.workers, origin);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string config_hash(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["inputs"] = cfg.paths.inputs;
    j["output_dir"] = cfg.paths.output_dir;
    j["blocklist"] = cfg.paths.blocklist;
    j["basic_quality_model"] = cfg.paths.basic_quality_model;
    j["hq_model"] = cfg.paths.hq_model;
    j["signature_cache"] = cfg.paths.signature_cache;
    j["stages"] = {cfg.stages.safety,        cfg.stages.clean,
                   cfg.stages.heuristics,    cfg.stages.basic_quality,
                   cfg.stages.dedup,         cfg.stages.hq_score,
                   cfg.stages.hq_threshold};
    j["dedup"] = {cfg.dedup.shingle_n,      cfg.dedup.num_perm,
                  cfg.dedup.bands,          cfg.dedup.rows,
                  cfg.dedup.similarity_threshold,
                  cfg.dedup.seed,           cfg.dedup.exact_verify};
    j["heuristics"] = {cfg.heuristics.min_chars,
                       cfg.heuristics.max_chars,
                       cfg.heuristics.max_duplicate_line_fraction,
                       cfg.heuristics.max_top_ngram_char_fraction,
                       cfg.heuristics.max_symbol_fraction,
                       cfg.heuristics.min_cjk_or_alnum_fraction,
                       cfg.heuristics.mean_line_len_min,
                       cfg.heuristics.mean_line_len_max};
    nlohmann::ordered_json rules = nlohmann::ordered_json::object();
    for (const auto& [source, rule] : cfg.parser_rules.by_source) {
        nlohmann::ordered_json r;
        r["min_line_chars"] = rule.min_line_chars;
        nlohmann::ordered_json filters = nlohmann::ordered_json::array();
        for (const ingest::LineFilter& f : rule.line_filters) {
            filters.push_back(
                {f.kind == ingest::LineFilter::Kind::substring ? "substring"
                                                               : "prefix",
                 f.pattern});
        }
        r["line_filters"] = std::move(filters);
        rules[source] = std::move(r);
    }
    j["parser_rules"] = std::move(rules);
    j["quality"] = {cfg.basic_quality_pass_threshold, cfg.hq_threshold};
    j["seed"] = cfg.seed;
    j["workers_ignored"] = 0;  // worker count never affects outcomes
    return to_hex(hash64(j.dump()));
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns,
                                      std::vector<std::string>* unmatched) {
    std::set<std::string> found;
    for (const std::string& pattern : patterns) {
        glob_t g;
        const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
        if (rc == GLOB_NOMATCH) {
            if (unmatched != nullptr) unmatched->push_back(pattern);
            ::globfree(&g);
            continue;
        }
        if (rc != 0) {
            ::globfree(&g);
            throw Error("bad_config", "cannot expand glob: " + pattern);
        }
        for (size_t i = 0; i < g.gl_pathc; ++i) found.insert(g.gl_pathv[i]);
        ::globfree(&g);
    }
    return {found.begin(), found.end()};
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.paths.inputs.empty()) {
        throw Error("bad_config", "paths.inputs is empty");
    }
    if (cfg.paths.output_dir.empty()) {
        throw Error("bad_config", "paths.output_dir is empty");
    }
    std::vector<std::string> unmatched;
    const std::vector<std::string> files = expand_globs(cfg.paths.inputs, &unmatched);
    if (!unmatched.empty()) {
        throw Error("bad_config", "input glob matched nothing: " + unmatched[0]);
    }
    if (files.empty()) {
        throw Error("bad_config", "no input files after glob expansion");
    }
    const auto require_path = [](const std::string& path, const char* what) {
        if (path.empty()) {
            throw Error("bad_config", std::string(what) + " path not configured");
        }
        if (!path_exists(path)) {
            throw Error("bad_config",
                        std::string(what) + " path does not exist: " + path);
        }
    };
    if (cfg.stages.safety) require_path(cfg.paths.blocklist, "blocklist");
    if (cfg.stages.basic_quality) {
        require_path(cfg.paths.basic_quality_model, "basic quality model");
    }
    if (cfg.stages.hq_score || cfg.stages.hq_threshold) {
        require_path(cfg.paths.hq_model, "quality model");
    }
    cfg.dedup.validate();
    cfg.heuristics.validate();
    if (cfg.basic_quality_pass_threshold < 0.0 ||
        cfg.basic_quality_pass_threshold > 5.0) {
        throw Error("bad_config", "basic_quality_pass_threshold outside [0, 5]");
    }
    if (cfg.hq_threshold < 0.0 || cfg.hq_threshold > 5.0) {
        throw Error("bad_config", "hq_threshold outside [0, 5]");
    }
}

}  // namespace curate::pipeline
