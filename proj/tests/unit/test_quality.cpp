#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "curate/error.hpp"
#include "curate/quality/annotate.hpp"
#include "curate/quality/features.hpp"
#include "curate/quality/model.hpp"
#include "curate/utf8.hpp"
#include "synth.hpp"

using namespace curate;
using namespace curate::quality;

TEST_CASE("extract_features is deterministic and l2-normalized") {
    FeatureExtractor fx;
    std::mt19937_64 rng(808);
    for (int i = 0; i < 10; ++i) {
        const std::string text = synth::prose(rng, 100 + rng() % 400);
        const SparseVector a = extract_features(text, fx);
        const SparseVector b = extract_features(text, fx);
        CHECK(a.indices == b.indices);
        CHECK(a.values == b.values);
        CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::is_sorted(a.indices.begin(), a.indices.end()));
        const std::set<uint32_t> uniq(a.indices.begin(), a.indices.end());
        CHECK(uniq.size() == a.indices.size());
        for (uint32_t idx : a.indices) CHECK(idx < fx.dimension);
    }
    CHECK(extract_features("", fx).indices.empty());
}

TEST_CASE("extract_features counts n-grams of every configured size") {
    FeatureExtractor fx;
    fx.dimension = 1u << 20;  // wide enough that collisions are unlikely
    fx.ngram_sizes = {1};
    // "aaa": one distinct unigram with count 3, normalized to 1.0
    const SparseVector uni = extract_features("aaa", fx);
    REQUIRE(uni.indices.size() == 1);
    CHECK(uni.values[0] == doctest::Approx(1.0));

    fx.ngram_sizes = {1, 2};
    // "ab": unigrams a, b and bigram ab, each once; norm 1/sqrt(3)
    const SparseVector bi = extract_features("ab", fx);
    REQUIRE(bi.indices.size() == 3);
    for (double v : bi.values) CHECK(v == doctest::Approx(1.0 / std::sqrt(3.0)));

    // different hash seeds give a different layout
    FeatureExtractor fx2 = fx;
    fx2.hash_seed = 1;
    CHECK(extract_features("ab", fx2).indices != bi.indices);
}

TEST_CASE("precomputed embeddings load and key by doc id") {
    synth::TempDir tmp("emb");
    const std::string path = tmp.file("vectors.jsonl");
    {
        std::ofstream out(path);
        out << R"({"id":"d1","embedding":[1.0,2.0,3.0]})" << "\n";
        out << R"({"id":"d2","embedding":[0.0,-1.0,0.5]})" << "\n";
    }
    const EmbeddingTable table = EmbeddingTable::load(path, 3);
    CHECK(table.size() == 2);
    REQUIRE(table.find("d1") != nullptr);
    CHECK(*table.find("d1") == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(table.find("missing") == nullptr);

    FeatureExtractor fx;
    fx.kind = FeatureExtractor::Kind::precomputed_embeddings;
    fx.embedding_dimension = 3;
    Document doc;
    doc.id = "d2";
    doc.text = "ignored";
    const SparseVector v = extract_features(doc, fx, &table);
    CHECK(v.values == std::vector<double>{0.0, -1.0, 0.5});
    CHECK(v.indices == std::vector<uint32_t>{0, 1, 2});

    Document missing;
    missing.id = "nope";
    CHECK_THROWS_AS(extract_features(missing, fx, &table), Error);
    CHECK_THROWS_AS(extract_features(doc, fx, nullptr), Error);

    // dimension mismatch in the file
    const std::string bad = tmp.file("bad.jsonl");
    std::ofstream(bad) << R"({"id":"d1","embedding":[1.0]})" << "\n";
    CHECK_THROWS_AS(EmbeddingTable::load(bad, 3), Error);
}

TEST_CASE("predict_score is dot plus bias with clamping") {
    QualityModel model = synth::constant_model(0.0, 3.0, 1u << 10);
    // craft weights so a known text scores predictably
    const std::string text = "scoring body";
    const SparseVector feats = extract_features(text, model.extractor);
    for (size_t i = 0; i < feats.indices.size(); ++i) {
        model.weights[feats.indices[i]] = 2.0 * feats.values[i];
    }
    model.bias = 1.0;
    Document doc;
    doc.id = "d";
    doc.text = text;
    const Prediction p = predict_score(model, doc);
    CHECK(p.raw == doctest::Approx(2.0 * 1.0 + 1.0));  // 2*|x|^2 + 1 = 3 for unit x
    CHECK(p.clamped == doctest::Approx(3.0));

    model.bias = 9.0;
    CHECK(predict_score(model, doc).clamped == 5.0);
    model.bias = -9.0;
    CHECK(predict_score(model, doc).clamped == 0.0);
}

TEST_CASE("binarize uses an inclusive threshold") {
    CHECK(binarize(3.0, 3.0) == Label::positive);
    CHECK(binarize(2.9999, 3.0) == Label::negative);
    CHECK(binarize(5.0, 3.0) == Label::positive);
    CHECK(binarize(0.0, 3.0) == Label::negative);
    CHECK(binarize(2.0, 2.0) == Label::positive);
}

TEST_CASE("model save/load round-trips every field") {
    synth::TempDir tmp("model");
    QualityModel model;
    model.extractor.ngram_sizes = {1, 2, 3};
    model.extractor.dimension = 1u << 12;
    model.extractor.hash_seed = 777;
    model.weights.assign(model.extractor.dimension, 0.0);
    std::mt19937_64 rng(4242);
    for (double& w : model.weights) {
        w = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
    }
    model.bias = -0.125;
    model.threshold = 2.5;
    model.training_meta.epochs = 20;
    model.training_meta.learning_rate = 3e-4;
    model.training_meta.seed = 31337;
    model.training_meta.best_epoch = 14;
    model.training_meta.best_val_macro_f1 = 0.912345;

    const std::string path = tmp.file("model.bin");
    save_model(path, model);
    const QualityModel back = load_model(path);
    CHECK(back.extractor.kind == model.extractor.kind);
    CHECK(back.extractor.ngram_sizes == model.extractor.ngram_sizes);
    CHECK(back.extractor.dimension == model.extractor.dimension);
    CHECK(back.extractor.hash_seed == model.extractor.hash_seed);
    CHECK(back.weights == model.weights);  // bit-exact payload
    CHECK(back.bias == model.bias);
    CHECK(back.threshold == model.threshold);
    CHECK(back.training_meta.epochs == model.training_meta.epochs);
    CHECK(back.training_meta.learning_rate == model.training_meta.learning_rate);
    CHECK(back.training_meta.seed == model.training_meta.seed);
    CHECK(back.training_meta.best_epoch == model.training_meta.best_epoch);
    CHECK(back.training_meta.best_val_macro_f1 ==
          model.training_meta.best_val_macro_f1);

    // predictions survive the round-trip bit-for-bit
    Document doc;
    doc.id = "d";
    doc.text = "round trip prediction check";
    CHECK(predict_score(model, doc).raw == predict_score(back, doc).raw);
}

TEST_CASE("load_model rejects foreign and corrupt files") {
    synth::TempDir tmp("model");
    const std::string junk = tmp.file("junk.bin");
    std::ofstream(junk, std::ios::binary) << "this is not a model file at all";
    CHECK_THROWS_AS(load_model(junk), Error);
    try {
        load_model(junk);
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "model_format");
    }

    const std::string model_path = tmp.file("model.bin");
    save_model(model_path, synth::constant_model(1.0));
    std::filesystem::resize_file(model_path,
                                 std::filesystem::file_size(model_path) / 2);
    CHECK_THROWS_AS(load_model(model_path), Error);
    CHECK_THROWS_AS(load_model(tmp.file("missing.bin")), Error);
}

TEST_CASE("build_annotation_request frames and truncates the document") {
    const AnnotationPrompt prompt = AnnotationPrompt::educational_default();
    Document doc;
    doc.id = "d";
    doc.text = "short body";
    const std::string req = build_annotation_request(doc, prompt);
    CHECK(req.find(kExcerptBegin) != std::string::npos);
    CHECK(req.find(kExcerptEnd) != std::string::npos);
    CHECK(req.find("short body") != std::string::npos);
    CHECK(req.find("{document}") == std::string::npos);
    // ends with the answer cue
    CHECK(req.rfind("Score:") == req.size() - 6);

    Document empty;
    empty.id = "e";
    CHECK_THROWS_AS(build_annotation_request(empty, prompt), Error);

    AnnotationPrompt tiny = prompt;
    tiny.max_doc_chars = 5;
    Document long_doc;
    long_doc.id = "l";
    long_doc.text = "\xE4\xB8\xAD\xE6\x96\x87\xE4\xB8\xAD\xE6\x96\x87"
                    "\xE4\xB8\xAD\xE6\x96\x87 and much more";
    const std::string cut = build_annotation_request(long_doc, tiny);
    CHECK(cut.find("[truncated]") != std::string::npos);
    // exactly five scalars survive
    CHECK(cut.find("\xE4\xB8\xAD\xE6\x96\x87\xE4\xB8\xAD\xE6\x96\x87\xE4\xB8\xAD"
                   "\n[truncated]") != std::string::npos);
    CHECK(cut.find("and much more") == std::string::npos);

    AnnotationPrompt bad;
    bad.template_text = "no slot here";
    CHECK_THROWS_AS(build_annotation_request(doc, bad), Error);
    bad.template_text = "{document} twice {document}";
    CHECK_THROWS_AS(build_annotation_request(doc, bad), Error);
}

TEST_CASE("parse_score extracts the last standalone small integer") {
    CHECK(parse_score("Score: 4") == 4);
    CHECK(parse_score("4") == 4);
    CHECK(parse_score("0") == 0);
    CHECK(parse_score("I would give this a 5.") == 5);
    CHECK(parse_score("Reasoning first. Score: 2") == 2);
    CHECK(parse_score("maybe 3, maybe 4") == 4);  // last wins
    CHECK(parse_score("I rate this 3 out of 5.") == 3);
    CHECK(parse_score("rating: 4/5") == 4);
    CHECK(parse_score("4 / 5") == 4);
    CHECK(parse_score("Score: 3\n") == 3);
    CHECK(parse_score("final\nScore: 1") == 1);
    CHECK(parse_score("The score is 2 (two)") == 2);
    CHECK(parse_score("2.5 rounds down to 2") == 2);  // decimal skipped, "2" kept

    // decimals, out-of-range runs, and denominators never count
    CHECK_THROWS_AS(parse_score("2.5"), Error);
    CHECK_THROWS_AS(parse_score("score 6"), Error);
    CHECK_THROWS_AS(parse_score("year 2024"), Error);
    CHECK_THROWS_AS(parse_score("out of 5"), Error);
    CHECK_THROWS_AS(parse_score("x/5"), Error);
    CHECK_THROWS_AS(parse_score(""), Error);
    CHECK_THROWS_AS(parse_score("no digits at all"), Error);
    CHECK_THROWS_AS(parse_score("version 1.2"), Error);
    try {
        parse_score("nope");
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "unparseable_score");
    }
}

namespace {

std::vector<Document> annotation_docs(size_t count) {
    std::vector<Document> docs;
    const auto scored = synth::make_scored_docs(count, 9090);
    for (const auto& sd : scored) docs.push_back(sd.doc);
    return docs;
}

ScriptedAnnotatorClient teacher_client() {
    return ScriptedAnnotatorClient(
        [](const std::string& excerpt) { return synth::teacher_score(excerpt); });
}

}  // namespace

TEST_CASE("annotate_corpus scores every document in input order") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(24);
    ScriptedAnnotatorClient client = teacher_client();
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");
    opts.concurrency = 4;
    const AnnotateOutcome out =
        annotate_corpus(docs, client, AnnotationPrompt::educational_default(), opts);
    REQUIRE(out.records.size() == docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        CHECK(out.records[i].doc_id == docs[i].id);
        CHECK(out.records[i].score == synth::teacher_score(docs[i].text));
        CHECK(out.records[i].annotator == "scripted");
    }
    CHECK(out.requests_made == docs.size());
    CHECK(out.resumed_from_journal == 0);
    CHECK(out.quarantined == 0);
}

TEST_CASE("annotate_corpus resumes from the journal without new requests") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(12);
    const AnnotationPrompt prompt = AnnotationPrompt::educational_default();
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");

    ScriptedAnnotatorClient first = teacher_client();
    const AnnotateOutcome one = annotate_corpus(docs, first, prompt, opts);
    CHECK(one.requests_made == docs.size());

    ScriptedAnnotatorClient second = teacher_client();
    const AnnotateOutcome two = annotate_corpus(docs, second, prompt, opts);
    CHECK(two.requests_made == 0);
    CHECK(second.requests() == 0);
    CHECK(two.resumed_from_journal == docs.size());
    REQUIRE(two.records.size() == one.records.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        CHECK(two.records[i].doc_id == one.records[i].doc_id);
        CHECK(two.records[i].score == one.records[i].score);
    }

    // partial journal: only the missing docs cost requests
    std::vector<Document> extended = docs;
    const std::vector<Document> more = annotation_docs(16);
    for (size_t i = 12; i < 16; ++i) extended.push_back(more[i]);
    ScriptedAnnotatorClient third = teacher_client();
    const AnnotateOutcome three = annotate_corpus(extended, third, prompt, opts);
    CHECK(three.requests_made == 4);
    CHECK(three.resumed_from_journal == 12);
    CHECK(three.records.size() == 16);
}

TEST_CASE("annotate_corpus retries transient failures with backoff") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(3);
    ScriptedAnnotatorClient client = teacher_client();
    client.fail_next(2, true);  // two transient failures, then recover
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");
    opts.concurrency = 1;
    opts.backoff_initial_ms = 1;
    const AnnotateOutcome out =
        annotate_corpus(docs, client, AnnotationPrompt::educational_default(), opts);
    CHECK(out.records.size() == 3);
    CHECK(out.retries == 2);
    CHECK(out.requests_made == 5);
    CHECK(out.quarantined == 0);
}

TEST_CASE("annotate_corpus quarantines permanent failures and keeps going") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(6);
    ScriptedAnnotatorClient client = teacher_client();
    client.fail_next(1, false);  // hard rejection for the first request
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");
    opts.quarantine_path = tmp.file("quarantine.jsonl");
    opts.concurrency = 1;
    const AnnotateOutcome out =
        annotate_corpus(docs, client, AnnotationPrompt::educational_default(), opts);
    CHECK(out.records.size() == 5);
    CHECK(out.quarantined == 1);

    std::ifstream q(opts.quarantine_path);
    std::string line;
    size_t lines = 0;
    while (std::getline(q, line)) {
        if (!line.empty()) ++lines;
        CHECK(line.find("request_rejected") != std::string::npos);
    }
    CHECK(lines == 1);
}

TEST_CASE("annotate_corpus quarantines unparseable responses") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(4);
    size_t calls = 0;
    // an out-of-range verdict renders as "Score: 9", which parse_score rejects
    ScriptedAnnotatorClient client(
        [&calls](const std::string&) -> int { return ++calls == 2 ? 9 : 3; });
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");
    opts.quarantine_path = tmp.file("quarantine.jsonl");
    opts.concurrency = 1;
    const AnnotateOutcome out =
        annotate_corpus(docs, client, AnnotationPrompt::educational_default(), opts);
    CHECK(out.records.size() == 3);
    CHECK(out.quarantined == 1);
}

TEST_CASE("annotate_corpus reports an unreachable endpoint") {
    synth::TempDir tmp("annotate");
    const std::vector<Document> docs = annotation_docs(3);
    ScriptedAnnotatorClient client = teacher_client();
    client.fail_next(1000, true);  // transient forever
    AnnotateOptions opts;
    opts.journal_path = tmp.file("journal.jsonl");
    opts.max_attempts = 2;
    opts.backoff_initial_ms = 1;
    opts.concurrency = 2;
    CHECK_THROWS_AS(
        annotate_corpus(docs, client, AnnotationPrompt::educational_default(), opts),
        Error);
    try {
        ScriptedAnnotatorClient again = teacher_client();
        again.fail_next(1000, true);
        annotate_corpus(docs, again, AnnotationPrompt::educational_default(), opts);
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "endpoint_unreachable");
    }
}

TEST_CASE("annotation records round-trip through files") {
    synth::TempDir tmp("annotate");
    std::vector<AnnotationRecord> records;
    for (int i = 0; i < 5; ++i) {
        AnnotationRecord r;
        r.doc_id = "doc" + std::to_string(i);
        r.score = i % 6;
        r.annotator = "unit";
        if (i % 2 == 0) r.raw_response = "Score: " + std::to_string(i % 6);
        records.push_back(std::move(r));
    }
    const std::string path = tmp.file("annotations.jsonl");
    write_annotations(records, path);
    const std::vector<AnnotationRecord> back = read_annotations(path);
    REQUIRE(back.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].doc_id == records[i].doc_id);
        CHECK(back[i].score == records[i].score);
        CHECK(back[i].annotator == records[i].annotator);
        CHECK(back[i].raw_response == records[i].raw_response);
    }

    const std::string bad = tmp.file("bad.jsonl");
    std::ofstream(bad) << R"({"doc_id":"a","score":9,"annotator":"x"})" << "\n";
    CHECK_THROWS_AS(read_annotations(bad), Error);
    CHECK_THROWS_AS(read_annotations(tmp.file("missing.jsonl")), Error);
}

TEST_CASE("agreement_rate measures exact and within-one fractions") {
    auto rec = [](const std::string& id, int score) {
        AnnotationRecord r;
        r.doc_id = id;
        r.score = score;
        return r;
    };
    const std::vector<AnnotationRecord> a = {rec("1", 3), rec("2", 0), rec("3", 5),
                                             rec("4", 2), rec("only_a", 1)};
    const std::vector<AnnotationRecord> b = {rec("1", 3), rec("2", 1), rec("3", 2),
                                             rec("4", 2), rec("only_b", 4)};
    const auto [exact, within_one] = agreement_rate(a, b);
    CHECK(exact == doctest::Approx(2.0 / 4.0));
    CHECK(within_one == doctest::Approx(3.0 / 4.0));

    CHECK_THROWS_AS(agreement_rate({rec("x", 1)}, {rec("y", 1)}), Error);
}
