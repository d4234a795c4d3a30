#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "curate/core/document.hpp"

namespace curate::quality {

// Scoring prompt with a single document slot ("{document}"). The default
// template carries a 0-5 educational-value rubric; the excerpt is truncated
// to max_doc_chars Unicode scalars with a marker when cut.
struct AnnotationPrompt {
    std::string template_text;
    size_t max_doc_chars = 3000;

    static AnnotationPrompt educational_default();
};

// Markers framing the excerpt in the default template; the scripted test
// client uses them to recover the document text from a rendered request.
inline constexpr const char* kExcerptBegin = "<<<document>>>";
inline constexpr const char* kExcerptEnd = "<<<end document>>>";

// Deterministic rendering; throws Error("empty_document") on empty text.
std::string build_annotation_request(const Document& doc,
                                     const AnnotationPrompt& prompt);

// Extracts the verdict from a free-form response: the last standalone
// integer in [0, 5], skipping decimals ("2.5") and scale denominators
// ("3 out of 5", "4/5"). Throws Error("unparseable_score") when absent.
int parse_score(const std::string& response);

// Transport interface to a scoring endpoint.
class AnnotatorClient {
  public:
    struct Reply {
        bool ok = false;
        bool retryable = false;  // transient failure, worth backing off for
        std::string text;        // assistant text when ok
        std::string error;
    };

    virtual ~AnnotatorClient() = default;
    virtual Reply complete(const std::string& request) = 0;
    virtual std::string name() const = 0;
};

// Chat-completion-style HTTP client. Base URL, model name and token come
// from explicit arguments or the CURATE_ANNOTATOR_URL /
// CURATE_ANNOTATOR_MODEL / CURATE_ANNOTATOR_TOKEN environment variables.
class HttpAnnotatorClient : public AnnotatorClient {
  public:
    HttpAnnotatorClient(std::string base_url, std::string model,
                        std::string token);
    static HttpAnnotatorClient from_environment();

    Reply complete(const std::string& request) override;
    std::string name() const override;

  private:
    std::string base_url_;
    std::string model_;
    std::string token_;
};

// In-process endpoint for tests and dry runs: scores the excerpt between
// the request markers with a caller-provided function. Optional scripted
// failures exercise the retry path.
class ScriptedAnnotatorClient : public AnnotatorClient {
  public:
    explicit ScriptedAnnotatorClient(std::function<int(const std::string&)> scorer,
                                     std::string name = "scripted");

    // The next `count` requests fail; retryable controls whether callers
    // should back off and retry.
    void fail_next(size_t count, bool retryable);

    Reply complete(const std::string& request) override;
    std::string name() const override { return name_; }
    size_t requests() const { return requests_; }

  private:
    std::function<int(const std::string&)> scorer_;
    std::string name_;
    size_t requests_ = 0;
    size_t failures_left_ = 0;
    bool failures_retryable_ = true;
};

struct AnnotateOptions {
    std::string journal_path;     // completed scores, append-only, resumable
    std::string quarantine_path;  // optional; failures with reasons
    size_t max_attempts = 3;
    size_t concurrency = 8;
    size_t backoff_initial_ms = 250;  // doubles per retry
};

struct AnnotateOutcome {
    std::vector<AnnotationRecord> records;  // input order, completed docs only
    size_t requests_made = 0;
    size_t retries = 0;
    size_t quarantined = 0;
    size_t resumed_from_journal = 0;
};

// Scores every document, resuming from the journal (docs already journaled
// cost zero requests). Transient failures retry up to max_attempts with
// exponential backoff; unparseable or permanently failing docs are
// quarantined. Throws only when the endpoint never yields a single success
// while permanent failures remain, or on journal I/O errors.
AnnotateOutcome annotate_corpus(const std::vector<Document>& docs,
                                AnnotatorClient& client,
                                const AnnotationPrompt& prompt,
                                const AnnotateOptions& opts);

// Journal / annotation-set file helpers (line-delimited records).
std::vector<AnnotationRecord> read_annotations(const std::string& path);
void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::string& path);

// Fraction of doc_id-aligned pairs agreeing exactly and within one point.
// Throws Error("no_overlap") when the id sets do not intersect.
std::pair<double, double> agreement_rate(const std::vector<AnnotationRecord>& a,
                                         const std::vector<AnnotationRecord>& b);

}  // namespace curate::quality
