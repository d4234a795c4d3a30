#include "curate/pipeline/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "curate/core/parallel.hpp"
#include "curate/core/records.hpp"
#include "curate/dedup/dedup.hpp"
#include "curate/dedup/signature_cache.hpp"
#include "curate/error.hpp"
#include "curate/hash.hpp"
#include "curate/heuristics/rules.hpp"
#include "curate/ingest/blocklist.hpp"
#include "curate/ingest/clean.hpp"
#include "curate/quality/model.hpp"
#include "curate/version.hpp"

namespace curate::pipeline {

namespace {

struct Rejected {
    Document doc;
    FilterVerdict verdict;
};

uint64_t text_bytes(const std::vector<Document>& docs) {
    uint64_t n = 0;
    for (const Document& d : docs) n += d.text.size();
    return n;
}

void require_hashed_extractor(const quality::QualityModel& model,
                              const char* what) {
    if (model.extractor.kind != quality::FeatureExtractor::Kind::hashed_char_ngrams) {
        throw Error("bad_config", std::string(what) +
                                      ": pipeline scoring needs a hashed-feature "
                                      "model, not precomputed embeddings");
    }
}

std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("unreadable_file", "cannot open for digest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    return to_hex(hash64(bytes));
}

RunResult run_pipeline(const PipelineConfig& cfg) {
    validate_config(cfg);
    const std::vector<std::string> inputs = expand_globs(cfg.paths.inputs);
    std::filesystem::create_directories(cfg.paths.output_dir);

    RunManifest manifest;
    manifest.tool_version = kVersion;
    manifest.config_hash = config_hash(cfg);
    for (const std::string& path : inputs) {
        manifest.inputs.emplace_back(path, file_digest(path));
    }

    CorpusStats stats;
    std::vector<StageTiming> timings;
    std::vector<Document> docs;
    std::vector<Rejected> rejects;

    using clock = std::chrono::steady_clock;
    const auto timed = [&](const std::string& name, auto&& fn) {
        const auto t0 = clock::now();
        fn();
        const std::chrono::duration<double> dt = clock::now() - t0;
        timings.push_back({name, dt.count()});
    };

    timed("ingest", [&] {
        StageStats& st = stats.stage("ingest");
        std::unordered_set<std::string> seen;
        for (const std::string& path : inputs) {
            RecordReader reader(path);
            Document doc;
            while (reader.next(doc)) {
                ++st.documents_in;
                st.bytes_in += doc.text.size();
                if (!seen.insert(doc.id).second) {
                    ++st.removal_reasons["duplicate_id"];
                    continue;
                }
                ++st.documents_out;
                st.bytes_out += doc.text.size();
                docs.push_back(std::move(doc));
            }
            st.documents_in += reader.errors().size();
            st.removal_reasons["malformed_record"] += reader.errors().size();
            if (reader.errors().empty()) {
                st.removal_reasons.erase("malformed_record");
            }
        }
    });

    // Filter stages: verdicts computed in parallel by index, partition applied
    // serially in input order so worker count never shows in the output.
    const auto filter_stage = [&](const std::string& name, auto&& verdict_fn) {
        timed(name, [&] {
            StageStats& st = stats.stage(name);
            st.documents_in = docs.size();
            st.bytes_in = text_bytes(docs);
            std::vector<FilterVerdict> verdicts(docs.size());
            parallel_for(docs.size(), cfg.workers,
                         [&](size_t i) { verdicts[i] = verdict_fn(docs[i], i); });
            std::vector<Document> next;
            next.reserve(docs.size());
            for (size_t i = 0; i < docs.size(); ++i) {
                if (verdicts[i].pass) {
                    st.bytes_out += docs[i].text.size();
                    next.push_back(std::move(docs[i]));
                } else {
                    ++st.removal_reasons[verdicts[i].reason];
                    rejects.push_back({std::move(docs[i]), std::move(verdicts[i])});
                }
            }
            st.documents_out = next.size();
            docs = std::move(next);
        });
    };

    if (cfg.stages.safety) {
        const ingest::Blocklist blocklist = ingest::load_blocklist(cfg.paths.blocklist);
        filter_stage(stage_name(Stage::safety), [&](const Document& d, size_t) {
            return ingest::safety_filter(d, blocklist);
        });
    }

    if (cfg.stages.clean) {
        timed(stage_name(Stage::cleaning), [&] {
            StageStats& st = stats.stage(stage_name(Stage::cleaning));
            st.documents_in = docs.size();
            st.bytes_in = text_bytes(docs);
            parallel_for(docs.size(), cfg.workers, [&](size_t i) {
                docs[i].text = ingest::clean_text(
                    docs[i].text, cfg.parser_rules.for_source(docs[i].source));
            });
            st.documents_out = docs.size();
            st.bytes_out = text_bytes(docs);
        });
    }

    if (cfg.stages.heuristics) {
        filter_stage(stage_name(Stage::heuristic), [&](const Document& d, size_t) {
            return heuristics::apply_heuristics(d, cfg.heuristics);
        });
    }

    if (cfg.stages.basic_quality) {
        heuristics::BasicQualityModel bq;
        bq.model = quality::load_model(cfg.paths.basic_quality_model);
        bq.pass_threshold = cfg.basic_quality_pass_threshold;
        require_hashed_extractor(bq.model, "basic quality model");
        filter_stage(stage_name(Stage::basic_quality), [&](const Document& d, size_t) {
            return heuristics::basic_quality_filter(d, bq);
        });
    }

    if (cfg.stages.dedup) {
        timed(stage_name(Stage::dedup), [&] {
            StageStats& st = stats.stage(stage_name(Stage::dedup));
            st.documents_in = docs.size();
            st.bytes_in = text_bytes(docs);

            std::unordered_map<std::string, dedup::DedupSignature> cached;
            if (!cfg.paths.signature_cache.empty()) {
                std::ifstream probe(cfg.paths.signature_cache, std::ios::binary);
                if (probe.good()) {
                    try {
                        for (dedup::DedupSignature& s : dedup::read_signature_cache(
                                 cfg.paths.signature_cache, cfg.dedup)) {
                            cached.emplace(s.doc_id, std::move(s));
                        }
                    } catch (const Error&) {
                        cached.clear();  // stale or foreign cache: recompute
                    }
                }
            }

            std::vector<dedup::DedupSignature> sigs(docs.size());
            std::atomic<size_t> fresh{0};
            parallel_for(docs.size(), cfg.workers, [&](size_t i) {
                auto it = cached.find(docs[i].id);
                if (it != cached.end() && (it->second.values.empty() ||
                                           it->second.values.size() ==
                                               cfg.dedup.num_perm)) {
                    sigs[i] = it->second;
                    return;
                }
                if (docs[i].text.empty()) {
                    sigs[i].values.clear();
                } else {
                    sigs[i] = dedup::signature_of_text(docs[i].text, cfg.dedup);
                }
                sigs[i].doc_id = docs[i].id;
                sigs[i].seed = cfg.dedup.seed;
                fresh.fetch_add(1, std::memory_order_relaxed);
            });
            if (!cfg.paths.signature_cache.empty() && fresh.load() > 0) {
                dedup::write_signature_cache(cfg.paths.signature_cache, cfg.dedup,
                                             sigs);
            }

            dedup::DedupResult res = dedup::dedup_corpus(docs, sigs, cfg.dedup);
            std::unordered_map<std::string, size_t> index;
            index.reserve(docs.size());
            for (size_t i = 0; i < docs.size(); ++i) index.emplace(docs[i].id, i);
            for (const auto& [id, verdict] : res.removed) {
                // The verdict keeps the winner id; the histogram stays compact.
                ++st.removal_reasons["duplicate"];
                rejects.push_back({std::move(docs[index.at(id)]), verdict});
            }
            docs = std::move(res.kept);
            st.documents_out = docs.size();
            st.bytes_out = text_bytes(docs);
        });
    }

    std::vector<double> hq_scores;
    quality::QualityModel hq;
    if (cfg.stages.hq_score || cfg.stages.hq_threshold) {
        hq = quality::load_model(cfg.paths.hq_model);
        require_hashed_extractor(hq, "quality model");
    }
    const auto score_all = [&] {
        hq_scores.resize(docs.size());
        parallel_for(docs.size(), cfg.workers, [&](size_t i) {
            hq_scores[i] = quality::predict_score(hq, docs[i]).raw;
        });
    };

    if (cfg.stages.hq_score) {
        timed("hq_score", [&] {
            StageStats& st = stats.stage("hq_score");
            st.documents_in = docs.size();
            st.bytes_in = text_bytes(docs);
            score_all();
            parallel_for(docs.size(), cfg.workers, [&](size_t i) {
                docs[i].meta["hq_score"] = format_score(hq_scores[i]);
            });
            st.documents_out = docs.size();
            st.bytes_out = text_bytes(docs);
        });
    }

    if (cfg.stages.hq_threshold) {
        const bool have_scores = hq_scores.size() == docs.size();
        filter_stage("hq_threshold", [&](const Document& d, size_t i) {
            const double score =
                have_scores ? hq_scores[i] : quality::predict_score(hq, d).raw;
            FilterVerdict v;
            v.stage = Stage::hq_classifier;
            v.score = score;
            if (quality::binarize(score, cfg.hq_threshold) != Label::positive) {
                v.pass = false;
                v.reason = "below_hq_threshold";
            }
            return v;
        });
    }

    const std::filesystem::path out_dir(cfg.paths.output_dir);
    const std::string kept_path = (out_dir / "kept.jsonl").string();
    const std::string rejects_path = (out_dir / "rejects.jsonl").string();

    timed("emit", [&] {
        StageStats& st = stats.stage("emit");
        st.documents_in = docs.size();
        st.bytes_in = text_bytes(docs);
        std::sort(docs.begin(), docs.end(),
                  [](const Document& a, const Document& b) { return a.id < b.id; });
        std::sort(rejects.begin(), rejects.end(),
                  [](const Rejected& a, const Rejected& b) {
                      return a.doc.id < b.doc.id;
                  });
        RecordWriter kept_writer(kept_path);
        for (const Document& d : docs) kept_writer.write(d);
        kept_writer.commit();
        RecordWriter reject_writer(rejects_path);
        for (const Rejected& r : rejects) {
            nlohmann::ordered_json j;
            j["stage"] = stage_name(r.verdict.stage);
            j["reason"] = r.verdict.reason;
            if (r.verdict.score.has_value()) j["score"] = *r.verdict.score;
            j["doc"] = doc_to_json(r.doc);
            reject_writer.write_line(j.dump());
        }
        reject_writer.commit();
        st.documents_out = docs.size();
        st.bytes_out = text_bytes(docs);
    });

    std::string why;
    if (!stats.reconciles(&why)) {
        throw Error("internal", "stage stats do not reconcile: " + why);
    }
    for (size_t i = 1; i < stats.stages.size(); ++i) {
        if (stats.stages[i].second.documents_in !=
            stats.stages[i - 1].second.documents_out) {
            throw Error("internal", "document flow broken entering stage " +
                                        stats.stages[i].first);
        }
    }

    manifest.stats = std::move(stats);
    manifest.timings = std::move(timings);
    manifest.documents_kept = docs.size();
    manifest.documents_rejected = rejects.size();
    manifest.kept_path = kept_path;
    manifest.rejects_path = rejects_path;
    manifest.kept_digest = file_digest(kept_path);
    manifest.rejects_digest = file_digest(rejects_path);

    RunResult result;
    result.manifest = manifest;
    result.manifest_path = (out_dir / "manifest.json").string();
    write_manifest(manifest, result.manifest_path);
    return result;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["tool_version"] = m.tool_version;
    j["config_hash"] = m.config_hash;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [in_path, digest] : m.inputs) {
        inputs.push_back({{"path", in_path}, {"digest", digest}});
    }
    j["inputs"] = std::move(inputs);
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (size_t i = 0; i < m.stats.stages.size(); ++i) {
        const auto& [name, st] = m.stats.stages[i];
        nlohmann::ordered_json s;
        s["name"] = name;
        s["documents_in"] = st.documents_in;
        s["documents_out"] = st.documents_out;
        s["bytes_in"] = st.bytes_in;
        s["bytes_out"] = st.bytes_out;
        s["removal_reasons"] = st.removal_reasons;
        s["seconds"] = i < m.timings.size() ? m.timings[i].seconds : 0.0;
        stages.push_back(std::move(s));
    }
    j["stages"] = std::move(stages);
    j["documents_kept"] = m.documents_kept;
    j["documents_rejected"] = m.documents_rejected;
    j["outputs"] = {{"kept", {{"path", m.kept_path}, {"digest", m.kept_digest}}},
                    {"rejects",
                     {{"path", m.rejects_path}, {"digest", m.rejects_digest}}}};

    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("io", "cannot open for writing: " + tmp);
    out << j.dump(2) << "\n";
    out.close();
    if (out.fail() || std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("io", "cannot write manifest: " + path);
    }
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open manifest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("malformed_record", "manifest is not a JSON object: " + path);
    }
    RunManifest m;
    try {
        m.tool_version = j.at("tool_version").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        for (const auto& e : j.at("inputs")) {
            m.inputs.emplace_back(e.at("path").get<std::string>(),
                                  e.at("digest").get<std::string>());
        }
        for (const auto& s : j.at("stages")) {
            const std::string name = s.at("name").get<std::string>();
            StageStats st;
            st.documents_in = s.at("documents_in").get<uint64_t>();
            st.documents_out = s.at("documents_out").get<uint64_t>();
            st.bytes_in = s.at("bytes_in").get<uint64_t>();
            st.bytes_out = s.at("bytes_out").get<uint64_t>();
            st.removal_reasons =
                s.at("removal_reasons").get<std::map<std::string, uint64_t>>();
            m.stats.stages.emplace_back(name, std::move(st));
            m.timings.push_back({name, s.at("seconds").get<double>()});
        }
        m.documents_kept = j.at("documents_kept").get<uint64_t>();
        m.documents_rejected = j.at("documents_rejected").get<uint64_t>();
        m.kept_path = j.at("outputs").at("kept").at("path").get<std::string>();
        m.kept_digest = j.at("outputs").at("kept").at("digest").get<std::string>();
        m.rejects_path = j.at("outputs").at("rejects").at("path").get<std::string>();
        m.rejects_digest =
            j.at("outputs").at("rejects").at("digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed_record",
                    "manifest missing fields: " + std::string(e.what()));
    }
    return m;
}

}  // namespace curate::pipeline
