// Command-line front end: one subcommand per pipeline capability.
// Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curate/core/parallel.hpp"
#include "curate/core/records.hpp"
#include "curate/dedup/dedup.hpp"
#include "curate/dedup/signature_cache.hpp"
#include "curate/error.hpp"
#include "curate/heuristics/rules.hpp"
#include "curate/ingest/blocklist.hpp"
#include "curate/ingest/clean.hpp"
#include "curate/metrics/report.hpp"
#include "curate/pipeline/config.hpp"
#include "curate/pipeline/run.hpp"
#include "curate/quality/annotate.hpp"
#include "curate/quality/train.hpp"
#include "curate/version.hpp"

namespace {

using namespace curate;

std::vector<std::string> expand_inputs(const std::vector<std::string>& globs) {
    std::vector<std::string> unmatched;
    std::vector<std::string> files = pipeline::expand_globs(globs, &unmatched);
    if (!unmatched.empty()) {
        throw Error("bad_config", "input matched nothing: " + unmatched[0]);
    }
    if (files.empty()) throw Error("bad_config", "no input files");
    return files;
}

struct LoadedCorpus {
    std::vector<Document> docs;
    size_t malformed = 0;
    size_t duplicate_ids = 0;
};

LoadedCorpus load_corpus(const std::vector<std::string>& globs) {
    LoadedCorpus corpus;
    std::unordered_set<std::string> seen;
    for (const std::string& path : expand_inputs(globs)) {
        RecordReader reader(path);
        Document doc;
        while (reader.next(doc)) {
            if (!seen.insert(doc.id).second) {
                ++corpus.duplicate_ids;
                continue;
            }
            corpus.docs.push_back(std::move(doc));
        }
        corpus.malformed += reader.errors().size();
    }
    return corpus;
}

void write_rejects(const std::string& path,
                   const std::vector<std::pair<Document, FilterVerdict>>& rejects) {
    RecordWriter writer(path);
    for (const auto& [doc, verdict] : rejects) {
        nlohmann::ordered_json j;
        j["stage"] = stage_name(verdict.stage);
        j["reason"] = verdict.reason;
        if (verdict.score.has_value()) j["score"] = *verdict.score;
        j["doc"] = doc_to_json(doc);
        writer.write_line(j.dump());
    }
    writer.commit();
}

// Training splits are document records carrying the annotation score as a
// "score" field (folded into meta on read).
std::vector<quality::LabeledExample> load_labeled(const std::string& path) {
    std::vector<quality::LabeledExample> out;
    for (Document& doc : read_records(path)) {
        auto it = doc.meta.find("score");
        if (it == doc.meta.end()) {
            throw Error("missing_annotation", path + ": no score on doc " + doc.id);
        }
        quality::LabeledExample ex;
        ex.doc_id = doc.id;
        ex.text = std::move(doc.text);
        try {
            ex.target = std::stod(it->second);
        } catch (const std::exception&) {
            throw Error("missing_annotation",
                        path + ": bad score on doc " + doc.id);
        }
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<AnnotationRecord> labels_from_meta(const std::vector<Document>& docs) {
    std::vector<AnnotationRecord> labels;
    for (const Document& doc : docs) {
        auto it = doc.meta.find("score");
        if (it == doc.meta.end()) continue;
        AnnotationRecord r;
        r.doc_id = doc.id;
        try {
            r.score = std::stoi(it->second);
        } catch (const std::exception&) {
            continue;
        }
        r.annotator = "meta";
        labels.push_back(std::move(r));
    }
    return labels;
}

void add_ingest(CLI::App& app) {
    auto args = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand(
        "ingest", "read raw record files, validate and renormalize them");
    cmd->add_option("--in", *args, "input file or glob")->required();
    cmd->add_option("--out", *out, "output corpus file")->required();
    cmd->callback([args, out] {
        LoadedCorpus corpus = load_corpus(*args);
        RecordWriter writer(*out);
        for (const Document& doc : corpus.docs) writer.write(doc);
        const size_t n = writer.commit();
        std::printf("ingested %zu documents (%zu malformed, %zu duplicate ids dropped)\n",
                    n, corpus.malformed, corpus.duplicate_ids);
    });
}

void add_filter(CLI::App& app) {
    struct Args {
        std::vector<std::string> inputs;
        std::string out;
        std::string rejects;
        std::string blocklist;
        std::string config;
        bool no_clean = false;
        size_t workers = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand(
        "filter", "safety, cleaning and heuristic filters over a corpus");
    cmd->add_option("--in", a->inputs, "input file or glob")->required();
    cmd->add_option("--out", a->out, "kept documents")->required();
    cmd->add_option("--rejects", a->rejects, "removed documents with verdicts");
    cmd->add_option("--blocklist", a->blocklist, "blocked-domain list");
    cmd->add_option("--config", a->config,
                    "pipeline config supplying heuristics and parser rules");
    cmd->add_flag("--no-clean", a->no_clean, "skip text cleaning");
    cmd->add_option("--workers", a->workers, "worker threads");
    cmd->callback([a] {
        pipeline::PipelineConfig cfg;
        if (!a->config.empty()) cfg = pipeline::load_config(a->config);
        cfg.heuristics.validate();
        LoadedCorpus corpus = load_corpus(a->inputs);
        std::vector<Document> docs = std::move(corpus.docs);
        std::vector<std::pair<Document, FilterVerdict>> rejects;

        const auto filter_pass = [&](auto&& verdict_fn) {
            std::vector<FilterVerdict> verdicts(docs.size());
            parallel_for(docs.size(), a->workers,
                         [&](size_t i) { verdicts[i] = verdict_fn(docs[i]); });
            std::vector<Document> next;
            next.reserve(docs.size());
            for (size_t i = 0; i < docs.size(); ++i) {
                if (verdicts[i].pass) {
                    next.push_back(std::move(docs[i]));
                } else {
                    rejects.emplace_back(std::move(docs[i]), std::move(verdicts[i]));
                }
            }
            docs = std::move(next);
        };

        if (!a->blocklist.empty()) {
            const ingest::Blocklist bl = ingest::load_blocklist(a->blocklist);
            filter_pass([&](const Document& d) { return ingest::safety_filter(d, bl); });
        }
        if (!a->no_clean) {
            parallel_for(docs.size(), a->workers, [&](size_t i) {
                docs[i].text = ingest::clean_text(
                    docs[i].text, cfg.parser_rules.for_source(docs[i].source));
            });
        }
        filter_pass([&](const Document& d) {
            return heuristics::apply_heuristics(d, cfg.heuristics);
        });

        RecordWriter writer(a->out);
        for (const Document& doc : docs) writer.write(doc);
        writer.commit();
        if (!a->rejects.empty()) write_rejects(a->rejects, rejects);
        std::printf("kept %zu documents, removed %zu\n", docs.size(), rejects.size());
    });
}

void add_dedup(CLI::App& app) {
    struct Args {
        std::vector<std::string> inputs;
        std::string out;
        std::string rejects;
        std::string cache;
        dedup::DedupConfig cfg;
        size_t workers = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand("dedup", "near-duplicate removal");
    cmd->add_option("--in", a->inputs, "input file or glob")->required();
    cmd->add_option("--out", a->out, "kept documents")->required();
    cmd->add_option("--rejects", a->rejects, "removed documents with verdicts");
    cmd->add_option("--cache", a->cache, "signature cache file");
    cmd->add_option("--seed", a->cfg.seed, "hash seed");
    cmd->add_option("--threshold", a->cfg.similarity_threshold,
                    "similarity threshold");
    cmd->add_option("--shingle-n", a->cfg.shingle_n, "shingle size");
    cmd->add_option("--num-perm", a->cfg.num_perm, "signature length");
    cmd->add_option("--bands", a->cfg.bands, "band count");
    cmd->add_option("--rows", a->cfg.rows, "rows per band");
    cmd->add_flag("--exact-verify", a->cfg.exact_verify,
                  "verify candidates with exact Jaccard");
    cmd->add_option("--workers", a->workers, "worker threads");
    cmd->callback([a] {
        a->cfg.validate();
        LoadedCorpus corpus = load_corpus(a->inputs);
        const std::vector<Document>& docs = corpus.docs;

        std::unordered_map<std::string, dedup::DedupSignature> cached;
        if (!a->cache.empty() && std::filesystem::exists(a->cache)) {
            try {
                for (dedup::DedupSignature& s :
                     dedup::read_signature_cache(a->cache, a->cfg)) {
                    cached.emplace(s.doc_id, std::move(s));
                }
            } catch (const Error&) {
                cached.clear();
            }
        }
        std::vector<dedup::DedupSignature> sigs(docs.size());
        size_t fresh = 0;
        parallel_for(docs.size(), a->workers, [&](size_t i) {
            auto it = cached.find(docs[i].id);
            if (it != cached.end()) {
                sigs[i] = it->second;
                return;
            }
            if (!docs[i].text.empty()) {
                sigs[i] = dedup::signature_of_text(docs[i].text, a->cfg);
            }
            sigs[i].doc_id = docs[i].id;
            sigs[i].seed = a->cfg.seed;
        });
        for (size_t i = 0; i < docs.size(); ++i) {
            if (cached.find(docs[i].id) == cached.end()) ++fresh;
        }
        if (!a->cache.empty() && fresh > 0) {
            dedup::write_signature_cache(a->cache, a->cfg, sigs);
        }

        dedup::DedupResult res = dedup::dedup_corpus(docs, sigs, a->cfg);
        RecordWriter writer(a->out);
        for (const Document& doc : res.kept) writer.write(doc);
        writer.commit();
        if (!a->rejects.empty()) {
            std::vector<std::pair<Document, FilterVerdict>> rejects;
            std::unordered_map<std::string, size_t> index;
            for (size_t i = 0; i < docs.size(); ++i) index.emplace(docs[i].id, i);
            for (const auto& [id, verdict] : res.removed) {
                rejects.emplace_back(docs[index.at(id)], verdict);
            }
            write_rejects(a->rejects, rejects);
        }
        size_t multi = 0;
        for (const auto& c : res.clusters.clusters) {
            if (c.size() > 1) ++multi;
        }
        std::printf("kept %zu of %zu documents (%zu duplicate clusters)\n",
                    res.kept.size(), docs.size(), multi);
    });
}

void add_annotate(CLI::App& app) {
    struct Args {
        std::vector<std::string> inputs;
        std::string out;
        std::string endpoint;
        std::string model;
        quality::AnnotateOptions opts;
        size_t max_doc_chars = 3000;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand(
        "annotate", "score documents 0-5 through a completion endpoint");
    cmd->add_option("--in", a->inputs, "input file or glob")->required();
    cmd->add_option("--out", a->out, "annotation records")->required();
    cmd->add_option("--journal", a->opts.journal_path,
                    "append-only journal; reruns resume from it");
    cmd->add_option("--quarantine", a->opts.quarantine_path,
                    "unusable responses end up here");
    cmd->add_option("--endpoint", a->endpoint,
                    "completion endpoint URL (default $CURATE_ANNOTATOR_URL)");
    cmd->add_option("--model", a->model, "model name sent to the endpoint");
    cmd->add_option("--max-attempts", a->opts.max_attempts,
                    "attempts per document");
    cmd->add_option("--concurrency", a->opts.concurrency, "parallel requests");
    cmd->add_option("--max-doc-chars", a->max_doc_chars,
                    "excerpt budget per document");
    cmd->callback([a] {
        LoadedCorpus corpus = load_corpus(a->inputs);
        std::unique_ptr<quality::HttpAnnotatorClient> client;
        if (!a->endpoint.empty()) {
            const char* token = std::getenv("CURATE_ANNOTATOR_TOKEN");
            client = std::make_unique<quality::HttpAnnotatorClient>(
                a->endpoint, a->model, token != nullptr ? token : "");
        } else {
            client = std::make_unique<quality::HttpAnnotatorClient>(
                quality::HttpAnnotatorClient::from_environment());
        }
        quality::AnnotationPrompt prompt = quality::AnnotationPrompt::educational_default();
        prompt.max_doc_chars = a->max_doc_chars;
        quality::AnnotateOutcome outcome =
            quality::annotate_corpus(corpus.docs, *client, prompt, a->opts);
        quality::write_annotations(outcome.records, a->out);
        std::printf(
            "annotated %zu documents (%zu requests, %zu retries, %zu quarantined, "
            "%zu resumed)\n",
            outcome.records.size(), outcome.requests_made, outcome.retries,
            outcome.quarantined, outcome.resumed_from_journal);
    });
}

void add_train(CLI::App& app) {
    struct Args {
        std::string train_path;
        std::string val_path;
        std::string out;
        std::string curves;
        quality::TrainConfig cfg;
        std::string lr_grid;
        uint32_t dimension_bits = 18;
        uint64_t hash_seed = 0;
        double threshold = 3.0;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand(
        "train-classifier", "fit the linear quality head on annotated splits");
    cmd->add_option("--train", a->train_path, "training split")->required();
    cmd->add_option("--val", a->val_path, "validation split")->required();
    cmd->add_option("--out", a->out, "model file")->required();
    cmd->add_option("--curves", a->curves, "training curves file");
    cmd->add_option("--epochs", a->cfg.epochs, "epochs per learning rate");
    cmd->add_option("--lr-grid", a->lr_grid,
                    "comma-separated learning rates (default 1e-4,3e-4,1e-3)");
    cmd->add_option("--batch", a->cfg.batch_size, "mini-batch size");
    cmd->add_option("--seed", a->cfg.seed, "shuffle seed");
    cmd->add_option("--dimension-bits", a->dimension_bits,
                    "hashed feature dimension as a power of two");
    cmd->add_option("--hash-seed", a->hash_seed, "feature hash seed");
    cmd->add_option("--threshold", a->threshold, "binarization threshold");
    cmd->callback([a] {
        if (!a->lr_grid.empty()) {
            a->cfg.lr_grid.clear();
            std::stringstream ss(a->lr_grid);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    a->cfg.lr_grid.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw Error("bad_config", "bad learning rate: " + item);
                }
            }
        }
        if (a->dimension_bits == 0 || a->dimension_bits > 28) {
            throw Error("bad_config", "dimension-bits must be in [1, 28]");
        }
        quality::FeatureExtractor fx;
        fx.dimension = 1u << a->dimension_bits;
        fx.hash_seed = a->hash_seed;
        const auto train = load_labeled(a->train_path);
        const auto val = load_labeled(a->val_path);
        quality::TrainResult result =
            quality::train_regressor(train, val, fx, a->cfg);
        result.model.threshold = a->threshold;
        quality::save_model(a->out, result.model);
        if (!a->curves.empty()) {
            quality::save_training_curves(a->curves, result.curves);
        }
        for (const std::string& w : result.warnings) {
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        }
        std::printf("model saved: lr %g, epoch %u, val macro-F1 %.4f\n",
                    result.chosen_learning_rate, result.chosen_epoch,
                    result.model.training_meta.best_val_macro_f1);
    });
}

void add_score(CLI::App& app) {
    struct Args {
        std::vector<std::string> inputs;
        std::string model_path;
        std::string out;
        std::string embeddings;
        size_t workers = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand("score", "attach model scores to documents");
    cmd->add_option("--in", a->inputs, "input file or glob")->required();
    cmd->add_option("--model", a->model_path, "model file")->required();
    cmd->add_option("--out", a->out, "scored documents")->required();
    cmd->add_option("--embeddings", a->embeddings,
                    "embedding table for precomputed-embedding models");
    cmd->add_option("--workers", a->workers, "worker threads");
    cmd->callback([a] {
        const quality::QualityModel model = quality::load_model(a->model_path);
        quality::EmbeddingTable table;
        const quality::EmbeddingTable* table_ptr = nullptr;
        if (!a->embeddings.empty()) {
            table = quality::EmbeddingTable::load(a->embeddings,
                                                  model.extractor.embedding_dimension);
            table_ptr = &table;
        }
        LoadedCorpus corpus = load_corpus(a->inputs);
        std::vector<Document>& docs = corpus.docs;
        parallel_for(docs.size(), a->workers, [&](size_t i) {
            const quality::Prediction p =
                quality::predict_score(model, docs[i], table_ptr);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", p.raw);
            docs[i].meta["hq_score"] = buf;
            docs[i].meta["hq_label"] =
                quality::binarize(p.raw, model.threshold) == Label::positive
                    ? "positive"
                    : "negative";
        });
        RecordWriter writer(a->out);
        for (const Document& doc : docs) writer.write(doc);
        writer.commit();
        std::printf("scored %zu documents\n", docs.size());
    });
}

void add_evaluate(CLI::App& app) {
    struct Args {
        std::vector<std::string> models;
        std::string test_path;
        std::string labels_path;
        std::string machine_out;
        size_t workers = 1;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand(
        "evaluate", "compare classifiers on one labeled test set");
    cmd->add_option("--models", a->models, "model files")
        ->required()
        ->delimiter(',');
    cmd->add_option("--test", a->test_path, "test documents")->required();
    cmd->add_option("--labels", a->labels_path,
                    "annotation records (default: score fields on the test docs)");
    cmd->add_option("--machine-out", a->machine_out,
                    "machine-readable report (default <test>.report.jsonl)");
    cmd->add_option("--workers", a->workers, "worker threads");
    cmd->callback([a] {
        const std::vector<Document> docs = read_records(a->test_path);
        std::vector<AnnotationRecord> labels;
        if (!a->labels_path.empty()) {
            labels = quality::read_annotations(a->labels_path);
        } else {
            labels = labels_from_meta(docs);
        }
        std::vector<quality::QualityModel> models;
        models.reserve(a->models.size());
        for (const std::string& path : a->models) {
            models.push_back(quality::load_model(path));
        }
        std::vector<metrics::NamedModel> named;
        for (size_t i = 0; i < models.size(); ++i) {
            named.push_back({std::filesystem::path(a->models[i]).stem().string(),
                             &models[i], nullptr});
        }
        const metrics::EvalReport report = metrics::compare_classifiers(
            named, docs, labels, std::filesystem::path(a->test_path).filename().string(),
            a->workers);
        std::fputs(metrics::render_human(report).c_str(), stdout);
        std::string machine_path = a->machine_out.empty()
                                       ? a->test_path + ".report.jsonl"
                                       : a->machine_out;
        const std::string machine = metrics::render_machine(report);
        RecordWriter writer(machine_path);
        std::istringstream lines(machine);
        std::string line;
        while (std::getline(lines, line)) writer.write_line(line);
        writer.commit();
        std::printf("\nmachine report: %s\n", machine_path.c_str());
    });
}

void add_run(CLI::App& app) {
    struct Args {
        std::string config;
        uint64_t seed = 0;
        size_t workers = 0;
        bool seed_set = false;
        bool workers_set = false;
    };
    auto a = std::make_shared<Args>();
    CLI::App* cmd = app.add_subcommand("run", "run the full pipeline from a config");
    cmd->add_option("--config", a->config, "pipeline config file")->required();
    cmd->add_option("--seed", a->seed, "override the config seed");
    cmd->add_option("--workers", a->workers, "override the config worker count");
    cmd->callback([a, cmd] {
        pipeline::PipelineConfig cfg = pipeline::load_config(a->config);
        if (cmd->count("--seed") > 0) {
            cfg.seed = a->seed;
            cfg.dedup.seed = a->seed;
        }
        if (cmd->count("--workers") > 0) cfg.workers = a->workers;
        const pipeline::RunResult result = pipeline::run_pipeline(cfg);
        std::fputs(result.manifest.stats.render().c_str(), stdout);
        std::printf("\nkept %llu, rejected %llu\nmanifest: %s\n",
                    static_cast<unsigned long long>(result.manifest.documents_kept),
                    static_cast<unsigned long long>(result.manifest.documents_rejected),
                    result.manifest_path.c_str());
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus curation toolkit"};
    app.set_version_flag("--version", curate::kVersion);
    app.require_subcommand(1);
    add_ingest(app);
    add_filter(app);
    add_dedup(app);
    add_annotate(app);
    add_train(app);
    add_score(app);
    add_evaluate(app);
    add_run(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const curate::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
