#include "curate/metrics/report.hpp"

#include <cstdio>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "curate/core/parallel.hpp"
#include "curate/error.hpp"

namespace curate::metrics {

EvalReport compare_classifiers(const std::vector<NamedModel>& models,
                               const std::vector<Document>& test_docs,
                               const std::vector<AnnotationRecord>& labels,
                               const std::string& test_set_name,
                               size_t workers) {
    if (models.empty()) throw Error("bad_input", "no classifiers to compare");
    if (test_docs.empty()) throw Error("bad_input", "empty test set");

    std::unordered_map<std::string, int> score_of;
    score_of.reserve(labels.size());
    for (const AnnotationRecord& r : labels) score_of.emplace(r.doc_id, r.score);

    std::vector<Label> truth;
    truth.reserve(test_docs.size());
    for (const Document& doc : test_docs) {
        auto it = score_of.find(doc.id);
        if (it == score_of.end()) {
            throw Error("missing_annotation", "no label for doc: " + doc.id);
        }
        truth.push_back(quality::binarize(it->second, kTruthThreshold));
    }

    EvalReport report;
    report.test_set = test_set_name;
    report.test_size = test_docs.size();
    report.classifiers.reserve(models.size());
    for (const NamedModel& nm : models) {
        ClassifierEval eval;
        eval.name = nm.name;
        try {
            if (nm.model == nullptr) {
                throw Error("bad_input", "classifier carries no model: " + nm.name);
            }
            std::vector<Label> preds(test_docs.size());
            parallel_for(test_docs.size(), workers, [&](size_t i) {
                const quality::Prediction p =
                    quality::predict_score(*nm.model, test_docs[i], nm.embeddings);
                preds[i] = quality::binarize(p.raw, nm.model->threshold);
            });
            eval.counts = confusion(preds, truth);
            eval.per_class = prf(eval.counts);
            eval.macro = macro_average(eval.per_class);
        } catch (const Error& e) {
            eval.failed = true;
            eval.failure_reason = e.code();
            eval.counts = {};
            eval.per_class = {};
            eval.macro = {};
        }
        report.classifiers.push_back(std::move(eval));
    }
    return report;
}

std::string format_2dp(double value) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.10f", value);
    std::string s = buf;
    bool negative = false;
    if (!s.empty() && s[0] == '-') {
        negative = true;
        s.erase(0, 1);
    }
    const size_t dot = s.find('.');
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const size_t keep = dot + 2;
    const bool round_up = digits.size() > keep && digits[keep] >= '5';
    digits.resize(keep);
    if (round_up) {
        int i = static_cast<int>(digits.size()) - 1;
        for (; i >= 0; --i) {
            if (digits[i] == '9') {
                digits[i] = '0';
            } else {
                ++digits[i];
                break;
            }
        }
        if (i < 0) digits.insert(digits.begin(), '1');
    }
    std::string int_part = digits.substr(0, digits.size() - 2);
    size_t first = int_part.find_first_not_of('0');
    if (first == std::string::npos) {
        int_part = "0";
    } else {
        int_part.erase(0, first);
    }
    std::string out = int_part + "." + digits.substr(digits.size() - 2);
    if (negative && out.find_first_not_of("0.") != std::string::npos) {
        out.insert(out.begin(), '-');
    }
    return out;
}

std::string render_human(const EvalReport& report) {
    std::ostringstream out;
    out << "test set: " << report.test_set << " (" << report.test_size
        << " documents)\n";
    char line[160];
    for (const ClassifierEval& eval : report.classifiers) {
        out << "\nclassifier: " << eval.name << "\n";
        if (eval.failed) {
            out << "  failed: " << eval.failure_reason << "\n";
            continue;
        }
        std::snprintf(line, sizeof(line), "  %-10s %9s %9s %9s\n", "class",
                      "precision", "recall", "f1");
        out << line;
        const auto row = [&](const char* name, double p, double r, double f1) {
            std::snprintf(line, sizeof(line), "  %-10s %9s %9s %9s\n", name,
                          format_2dp(p).c_str(), format_2dp(r).c_str(),
                          format_2dp(f1).c_str());
            out << line;
        };
        row("positive", eval.per_class.positive.precision,
            eval.per_class.positive.recall, eval.per_class.positive.f1);
        row("negative", eval.per_class.negative.precision,
            eval.per_class.negative.recall, eval.per_class.negative.f1);
        row("macro", eval.macro.precision, eval.macro.recall, eval.macro.f1);
    }
    return out.str();
}

namespace {

nlohmann::ordered_json class_to_json(const ClassMetrics& m) {
    nlohmann::ordered_json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["precision_degenerate"] = m.precision_degenerate;
    j["recall_degenerate"] = m.recall_degenerate;
    j["f1_degenerate"] = m.f1_degenerate;
    return j;
}

ClassMetrics class_from_json(const nlohmann::json& j) {
    ClassMetrics m;
    m.precision = j.at("precision").get<double>();
    m.recall = j.at("recall").get<double>();
    m.f1 = j.at("f1").get<double>();
    m.precision_degenerate = j.at("precision_degenerate").get<bool>();
    m.recall_degenerate = j.at("recall_degenerate").get<bool>();
    m.f1_degenerate = j.at("f1_degenerate").get<bool>();
    return m;
}

}  // namespace

std::string render_machine(const EvalReport& report) {
    std::ostringstream out;
    nlohmann::ordered_json head;
    head["record"] = "report";
    head["test_set"] = report.test_set;
    head["test_size"] = report.test_size;
    out << head.dump() << "\n";
    for (const ClassifierEval& eval : report.classifiers) {
        nlohmann::ordered_json j;
        j["record"] = "classifier";
        j["name"] = eval.name;
        j["failed"] = eval.failed;
        j["failure_reason"] = eval.failure_reason;
        j["counts"] = {{"tp", eval.counts.tp},
                       {"fp", eval.counts.fp},
                       {"tn", eval.counts.tn},
                       {"fn", eval.counts.fn}};
        j["positive"] = class_to_json(eval.per_class.positive);
        j["negative"] = class_to_json(eval.per_class.negative);
        j["macro"] = {{"precision", eval.macro.precision},
                      {"recall", eval.macro.recall},
                      {"f1", eval.macro.f1}};
        out << j.dump() << "\n";
    }
    return out.str();
}

EvalReport parse_machine(const std::string& text) {
    EvalReport report;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    bool saw_head = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("record")) {
            throw Error("malformed_record",
                        "report line " + std::to_string(line_no) + " invalid");
        }
        try {
            const std::string kind = j.at("record").get<std::string>();
            if (kind == "report") {
                if (saw_head) throw Error("malformed_record", "duplicate header");
                saw_head = true;
                report.test_set = j.at("test_set").get<std::string>();
                report.test_size = j.at("test_size").get<uint64_t>();
            } else if (kind == "classifier") {
                if (!saw_head) throw Error("malformed_record", "missing header");
                ClassifierEval eval;
                eval.name = j.at("name").get<std::string>();
                eval.failed = j.at("failed").get<bool>();
                eval.failure_reason = j.at("failure_reason").get<std::string>();
                const auto& c = j.at("counts");
                eval.counts.tp = c.at("tp").get<uint64_t>();
                eval.counts.fp = c.at("fp").get<uint64_t>();
                eval.counts.tn = c.at("tn").get<uint64_t>();
                eval.counts.fn = c.at("fn").get<uint64_t>();
                eval.per_class.positive = class_from_json(j.at("positive"));
                eval.per_class.negative = class_from_json(j.at("negative"));
                const auto& m = j.at("macro");
                eval.macro.precision = m.at("precision").get<double>();
                eval.macro.recall = m.at("recall").get<double>();
                eval.macro.f1 = m.at("f1").get<double>();
                report.classifiers.push_back(std::move(eval));
            } else {
                throw Error("malformed_record", "unknown record kind: " + kind);
            }
        } catch (const nlohmann::json::exception&) {
            throw Error("malformed_record",
                        "report line " + std::to_string(line_no) + " invalid");
        }
    }
    if (!saw_head) throw Error("malformed_record", "report header missing");
    return report;
}

}  // namespace curate::metrics
