#include "curate/quality/annotate.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "curate/error.hpp"
#include "curate/utf8.hpp"

namespace curate::quality {

AnnotationPrompt AnnotationPrompt::educational_default() {
    AnnotationPrompt p;
    p.template_text =
        "You are rating how much educational value a web document offers a "
        "learner.\n"
        "\n"
        "Use this additive 0-5 scale:\n"
        "0 - none: spam, ads, navigation boilerplate, or gibberish\n"
        "1 - minimal: mostly promotional or repetitive text with stray facts\n"
        "2 - some: fragments of useful information, but shallow or disorganized\n"
        "3 - clear: coherent explanations or practical knowledge, if incomplete\n"
        "4 - high: accurate, organized, substantial treatment of a topic\n"
        "5 - exceptional: thorough, well-structured teaching material\n"
        "\n"
        "Briefly justify your judgement, then give the integer score alone on "
        "the final line.\n"
        "\n"
        "<<<document>>>\n"
        "{document}\n"
        "<<<end document>>>\n"
        "\n"
        "Score:";
    return p;
}

std::string build_annotation_request(const Document& doc,
                                     const AnnotationPrompt& prompt) {
    if (doc.text.empty()) {
        throw Error("empty_document", "cannot annotate empty text: " + doc.id);
    }
    const std::string slot = "{document}";
    const size_t at = prompt.template_text.find(slot);
    if (at == std::string::npos ||
        prompt.template_text.find(slot, at + 1) != std::string::npos) {
        throw Error("bad_config", "prompt template needs exactly one {document} slot");
    }
    std::string excerpt;
    const size_t cut = utf8::offset_at(doc.text, prompt.max_doc_chars);
    if (cut < doc.text.size()) {
        excerpt = doc.text.substr(0, cut);
        excerpt += "\n[truncated]";
    } else {
        excerpt = doc.text;
    }
    std::string out = prompt.template_text;
    out.replace(at, slot.size(), excerpt);
    return out;
}

int parse_score(const std::string& response) {
    const auto is_digit = [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
    };
    int found = -1;
    size_t i = 0;
    while (i < response.size()) {
        if (!is_digit(response[i])) {
            ++i;
            continue;
        }
        const size_t start = i;
        while (i < response.size() && is_digit(response[i])) ++i;
        const size_t end = i;

        // Part of a decimal number ("2.5") on either side: not a standalone
        // integer.
        if (start >= 2 && response[start - 1] == '.' && is_digit(response[start - 2])) {
            continue;
        }
        if (end + 1 < response.size() && response[end] == '.' &&
            is_digit(response[end + 1])) {
            continue;
        }

        // Scale denominators ("4/5", "3 out of 5") name the scale, not the
        // verdict.
        size_t p = start;
        while (p > 0 && response[p - 1] == ' ') --p;
        if (p > 0 && response[p - 1] == '/') continue;
        const std::string kOutOf = "out of";
        if (p >= kOutOf.size()) {
            bool match = true;
            for (size_t k = 0; k < kOutOf.size(); ++k) {
                const char c = response[p - kOutOf.size() + k];
                if (std::tolower(static_cast<unsigned char>(c)) != kOutOf[k]) {
                    match = false;
                    break;
                }
            }
            if (match) continue;
        }

        if (end - start <= 2) {
            int value = 0;
            for (size_t k = start; k < end; ++k) value = value * 10 + (response[k] - '0');
            if (value >= 0 && value <= 5) found = value;
        }
    }
    if (found < 0) {
        throw Error("unparseable_score", "no standalone integer in [0, 5] found");
    }
    return found;
}

HttpAnnotatorClient::HttpAnnotatorClient(std::string base_url, std::string model,
                                         std::string token)
    : base_url_(std::move(base_url)), model_(std::move(model)),
      token_(std::move(token)) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
    if (base_url_.empty()) {
        throw Error("bad_config", "annotator endpoint URL is empty");
    }
}

HttpAnnotatorClient HttpAnnotatorClient::from_environment() {
    const char* url = std::getenv("CURATE_ANNOTATOR_URL");
    if (url == nullptr || *url == '\0') {
        throw Error("bad_config", "CURATE_ANNOTATOR_URL is not set");
    }
    const char* model = std::getenv("CURATE_ANNOTATOR_MODEL");
    const char* token = std::getenv("CURATE_ANNOTATOR_TOKEN");
    return HttpAnnotatorClient(url, model != nullptr ? model : "",
                               token != nullptr ? token : "");
}

std::string HttpAnnotatorClient::name() const {
    return model_.empty() ? "http" : model_;
}

AnnotatorClient::Reply HttpAnnotatorClient::complete(const std::string& request) {
    Reply reply;
    nlohmann::json body;
    body["model"] = model_;
    body["temperature"] = 0;
    body["messages"] = nlohmann::json::array(
        {{{"role", "system"},
          {"content", "You are a careful, consistent document rater."}},
         {{"role", "user"}, {"content", request}}});

    // A fresh connection per call keeps this object safe to share between
    // worker threads; annotation is endpoint-bound, not connection-bound.
    httplib::Client client(base_url_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res) {
        reply.retryable = true;
        reply.error = "connection failed: " + httplib::to_string(res.error());
        return reply;
    }
    if (res->status == 429 || res->status >= 500) {
        reply.retryable = true;
        reply.error = "endpoint returned status " + std::to_string(res->status);
        return reply;
    }
    if (res->status != 200) {
        reply.error = "endpoint returned status " + std::to_string(res->status);
        return reply;
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
        !j["choices"][0].contains("message")) {
        reply.error = "malformed completion response";
        return reply;
    }
    const auto& message = j["choices"][0]["message"];
    if (!message.contains("content") || !message["content"].is_string()) {
        reply.error = "completion response carries no text";
        return reply;
    }
    reply.ok = true;
    reply.text = message["content"].get<std::string>();
    return reply;
}

ScriptedAnnotatorClient::ScriptedAnnotatorClient(
    std::function<int(const std::string&)> scorer, std::string name)
    : scorer_(std::move(scorer)), name_(std::move(name)) {}

void ScriptedAnnotatorClient::fail_next(size_t count, bool retryable) {
    failures_left_ = count;
    failures_retryable_ = retryable;
}

AnnotatorClient::Reply ScriptedAnnotatorClient::complete(const std::string& request) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    ++requests_;
    Reply reply;
    if (failures_left_ > 0) {
        --failures_left_;
        reply.retryable = failures_retryable_;
        reply.error = "scripted failure";
        return reply;
    }
    std::string begin_marker = std::string(kExcerptBegin) + "\n";
    const size_t b = request.find(begin_marker);
    const size_t e = request.find(std::string("\n") + kExcerptEnd);
    if (b == std::string::npos || e == std::string::npos || e < b) {
        reply.error = "request carries no excerpt markers";
        return reply;
    }
    const std::string excerpt =
        request.substr(b + begin_marker.size(), e - b - begin_marker.size());
    reply.ok = true;
    reply.text = "Score: " + std::to_string(scorer_(excerpt));
    return reply;
}

namespace {

nlohmann::ordered_json annotation_to_json(const AnnotationRecord& r) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["score"] = r.score;
    j["annotator"] = r.annotator;
    if (r.raw_response.has_value()) j["raw_response"] = *r.raw_response;
    return j;
}

AnnotationRecord annotation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("doc_id") || !j.contains("score") ||
        !j["doc_id"].is_string() || !j["score"].is_number_integer()) {
        throw Error("malformed_record", "bad annotation record");
    }
    AnnotationRecord r;
    r.doc_id = j["doc_id"].get<std::string>();
    r.score = j["score"].get<int>();
    if (r.score < 0 || r.score > 5) {
        throw Error("malformed_record", "annotation score outside [0, 5]");
    }
    if (j.contains("annotator") && j["annotator"].is_string()) {
        r.annotator = j["annotator"].get<std::string>();
    }
    if (j.contains("raw_response") && j["raw_response"].is_string()) {
        r.raw_response = j["raw_response"].get<std::string>();
    }
    return r;
}

}  // namespace

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open annotations: " + path);
    std::vector<AnnotationRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw Error("malformed_record",
                        path + ":" + std::to_string(line_no) + ": invalid record");
        }
        records.push_back(annotation_from_json(j));
    }
    return records;
}

void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("io", "cannot open for writing: " + tmp);
    for (const AnnotationRecord& r : records) {
        out << annotation_to_json(r).dump() << "\n";
    }
    out.close();
    if (out.fail() || std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("io", "cannot write annotations: " + path);
    }
}

AnnotateOutcome annotate_corpus(const std::vector<Document>& docs,
                                AnnotatorClient& client,
                                const AnnotationPrompt& prompt,
                                const AnnotateOptions& opts) {
    AnnotateOutcome outcome;

    // Resume: anything already journaled is done.
    std::unordered_map<std::string, AnnotationRecord> done;
    if (!opts.journal_path.empty()) {
        std::ifstream probe(opts.journal_path);
        if (probe.good()) {
            for (AnnotationRecord& r : read_annotations(opts.journal_path)) {
                done.emplace(r.doc_id, std::move(r));
            }
        }
    }

    std::vector<size_t> pending;
    for (size_t i = 0; i < docs.size(); ++i) {
        if (done.count(docs[i].id) != 0) {
            ++outcome.resumed_from_journal;
        } else {
            pending.push_back(i);
        }
    }

    std::ofstream journal;
    if (!opts.journal_path.empty() && !pending.empty()) {
        journal.open(opts.journal_path, std::ios::app);
        if (!journal) {
            throw Error("io", "cannot open journal: " + opts.journal_path);
        }
    }

    struct Failure {
        std::string doc_id;
        std::string reason;
        std::string response;
    };
    std::vector<Failure> failures;
    std::unordered_map<std::string, AnnotationRecord> fresh;

    std::mutex mu;  // guards journal, fresh, failures, outcome counters
    std::atomic<size_t> cursor{0};
    std::atomic<bool> abort{false};
    size_t transient_exhausted = 0;

    auto worker = [&]() {
        while (!abort.load()) {
            const size_t slot = cursor.fetch_add(1);
            if (slot >= pending.size()) return;
            const Document& doc = docs[pending[slot]];

            std::string request;
            try {
                request = build_annotation_request(doc, prompt);
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(mu);
                failures.push_back({doc.id, e.code(), ""});
                continue;
            }

            AnnotatorClient::Reply reply;
            bool transient_failure = false;
            for (size_t attempt = 1; attempt <= opts.max_attempts; ++attempt) {
                reply = client.complete(request);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    ++outcome.requests_made;
                }
                if (reply.ok || !reply.retryable) break;
                if (attempt < opts.max_attempts) {
                    std::lock_guard<std::mutex> lock(mu);
                    ++outcome.retries;
                }
                if (attempt < opts.max_attempts && opts.backoff_initial_ms > 0) {
                    std::this_thread::sleep_for(std::chrono::milliseconds(
                        opts.backoff_initial_ms << (attempt - 1)));
                }
            }
            if (!reply.ok) {
                transient_failure = reply.retryable;
                std::lock_guard<std::mutex> lock(mu);
                failures.push_back({doc.id,
                                    transient_failure ? "endpoint_error"
                                                      : "request_rejected",
                                    reply.error});
                if (transient_failure) ++transient_exhausted;
                continue;
            }

            AnnotationRecord record;
            record.doc_id = doc.id;
            record.annotator = client.name();
            record.raw_response = reply.text;
            try {
                record.score = parse_score(reply.text);
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(mu);
                failures.push_back({doc.id, e.code(), reply.text});
                continue;
            }

            std::lock_guard<std::mutex> lock(mu);
            if (journal.is_open()) {
                journal << annotation_to_json(record).dump() << "\n";
                journal.flush();
                if (!journal) {
                    abort.store(true);
                    return;
                }
            }
            fresh.emplace(record.doc_id, std::move(record));
        }
    };

    const size_t workers =
        std::max<size_t>(1, std::min(opts.concurrency, pending.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (abort.load()) {
        throw Error("io", "journal write failed: " + opts.journal_path);
    }

    // An endpoint that never produced one success while transient failures
    // piled up is unreachable, not noisy.
    if (!pending.empty() && fresh.empty() && transient_exhausted == pending.size()) {
        throw Error("endpoint_unreachable",
                    "no request succeeded after retries; giving up");
    }

    outcome.quarantined = failures.size();
    if (!opts.quarantine_path.empty() && !failures.empty()) {
        std::ofstream q(opts.quarantine_path, std::ios::app);
        if (!q) throw Error("io", "cannot open quarantine: " + opts.quarantine_path);
        for (const Failure& f : failures) {
            nlohmann::ordered_json j;
            j["doc_id"] = f.doc_id;
            j["reason"] = f.reason;
            j["response"] = f.response;
            q << j.dump() << "\n";
        }
    }

    for (const Document& doc : docs) {
        auto it = done.find(doc.id);
        if (it != done.end()) {
            outcome.records.push_back(it->second);
            continue;
        }
        it = fresh.find(doc.id);
        if (it != fresh.end()) outcome.records.push_back(it->second);
    }
    return outcome;
}

std::pair<double, double> agreement_rate(const std::vector<AnnotationRecord>& a,
                                         const std::vector<AnnotationRecord>& b) {
    std::unordered_map<std::string, int> scores_b;
    scores_b.reserve(b.size());
    for (const AnnotationRecord& r : b) scores_b.emplace(r.doc_id, r.score);
    size_t common = 0;
    size_t exact = 0;
    size_t within_one = 0;
    for (const AnnotationRecord& r : a) {
        auto it = scores_b.find(r.doc_id);
        if (it == scores_b.end()) continue;
        ++common;
        const int diff = r.score - it->second;
        if (diff == 0) ++exact;
        if (diff >= -1 && diff <= 1) ++within_one;
    }
    if (common == 0) {
        throw Error("no_overlap", "annotation sets share no doc ids");
    }
    return {static_cast<double>(exact) / static_cast<double>(common),
            static_cast<double>(within_one) / static_cast<double>(common)};
}

}  // namespace curate::quality
