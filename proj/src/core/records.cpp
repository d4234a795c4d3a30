#include "curate/core/records.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <fstream>

#include "curate/error.hpp"
#include "curate/utf8.hpp"

namespace curate {

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Registrable domains carry no scheme, path, port, or userinfo.
bool domain_shape_ok(const std::string& d) {
    for (char c : d) {
        if (c == '/' || c == ':' || c == '@' || c == ' ' || c == '\t') return false;
    }
    return true;
}

std::string ascii_lower(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

}  // namespace

nlohmann::ordered_json doc_to_json(const Document& doc) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["source"] = doc.source;
    j["domain"] = doc.domain;
    j["text"] = doc.text;
    if (doc.timestamp.has_value()) j["timestamp"] = *doc.timestamp;
    if (!doc.meta.empty()) j["meta"] = doc.meta;
    return j;
}

std::string doc_to_line(const Document& doc) { return doc_to_json(doc).dump(); }

Document doc_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("malformed_record", "record is not an object");
    Document doc;
    for (const auto& [key, value] : j.items()) {
        if (key == "id") {
            if (!value.is_string()) throw Error("malformed_record", "id must be a string");
            doc.id = value.get<std::string>();
        } else if (key == "source") {
            if (!value.is_string()) {
                throw Error("malformed_record", "source must be a string");
            }
            doc.source = value.get<std::string>();
        } else if (key == "domain") {
            if (!value.is_string()) {
                throw Error("malformed_record", "domain must be a string");
            }
            doc.domain = ascii_lower(value.get<std::string>());
            if (!domain_shape_ok(doc.domain)) {
                throw Error("malformed_record",
                            "domain contains scheme, path, port, or userinfo: " +
                                doc.domain);
            }
        } else if (key == "text") {
            if (!value.is_string()) {
                throw Error("malformed_record", "text must be a string");
            }
            doc.text = value.get<std::string>();
        } else if (key == "timestamp") {
            if (value.is_null()) continue;
            if (!value.is_number_integer()) {
                throw Error("malformed_record", "timestamp must be an integer");
            }
            doc.timestamp = value.get<int64_t>();
        } else if (key == "meta") {
            if (!value.is_object()) {
                throw Error("malformed_record", "meta must be an object");
            }
            for (const auto& [mk, mv] : value.items()) {
                doc.meta[mk] = mv.is_string() ? mv.get<std::string>() : mv.dump();
            }
        } else {
            // Unknown fields ride along in meta for provenance safety.
            doc.meta.emplace(key, value.is_string() ? value.get<std::string>()
                                                    : value.dump());
        }
    }
    if (doc.id.empty()) throw Error("malformed_record", "id missing or empty");
    if (!utf8::valid(doc.text)) {
        throw Error("malformed_record", "text is not valid UTF-8");
    }
    return doc;
}

Document doc_from_line(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error("malformed_record", "invalid record syntax");
    return doc_from_json(j);
}

struct RecordReader::Impl {
    gzFile file = nullptr;
    std::string pending;
    bool eof = false;
};

RecordReader::RecordReader(const std::string& path) : impl_(new Impl) {
    // zlib reads uncompressed files transparently, so one open path serves
    // both plain and .gz inputs.
    impl_->file = gzopen(path.c_str(), "rb");
    if (impl_->file == nullptr) {
        throw Error("unreadable_file", "cannot open for reading: " + path);
    }
}

RecordReader::~RecordReader() {
    if (impl_->file != nullptr) gzclose(impl_->file);
}

bool RecordReader::next_line(std::string& line) {
    if (impl_->eof) return false;
    line.clear();
    char buf[1 << 16];
    while (true) {
        if (gzgets(impl_->file, buf, sizeof(buf)) == nullptr) {
            int errnum = 0;
            const char* msg = gzerror(impl_->file, &errnum);
            if (errnum != Z_OK && errnum != Z_STREAM_END) {
                throw Error("io", std::string("read failed: ") + msg);
            }
            impl_->eof = true;
            return !line.empty();
        }
        line += buf;
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
    }
}

bool RecordReader::next(Document& doc) {
    std::string line;
    while (next_line(line)) {
        ++line_no_;
        if (line.empty()) continue;
        try {
            doc = doc_from_line(line);
            return true;
        } catch (const Error& e) {
            errors_.push_back({line_no_, e.what()});
        }
    }
    return false;
}

struct RecordWriter::Impl {
    std::string final_path;
    std::string tmp_path;
    gzFile gz = nullptr;
    std::ofstream plain;
    bool use_gz = false;

    void put(const std::string& data) {
        if (use_gz) {
            if (gzwrite(gz, data.data(), static_cast<unsigned>(data.size())) !=
                static_cast<int>(data.size())) {
                throw Error("io", "write failed: " + tmp_path);
            }
        } else {
            plain.write(data.data(), static_cast<std::streamsize>(data.size()));
            if (!plain) throw Error("io", "write failed: " + tmp_path);
        }
    }
};

RecordWriter::RecordWriter(const std::string& path) : impl_(new Impl) {
    impl_->final_path = path;
    impl_->tmp_path = path + ".tmp";
    impl_->use_gz = has_gz_suffix(path);
    if (impl_->use_gz) {
        impl_->gz = gzopen(impl_->tmp_path.c_str(), "wb");
        if (impl_->gz == nullptr) {
            throw Error("io", "cannot open for writing: " + impl_->tmp_path);
        }
    } else {
        impl_->plain.open(impl_->tmp_path, std::ios::binary | std::ios::trunc);
        if (!impl_->plain) {
            throw Error("io", "cannot open for writing: " + impl_->tmp_path);
        }
    }
}

RecordWriter::~RecordWriter() {
    if (committed_) return;
    if (impl_->use_gz) {
        if (impl_->gz != nullptr) gzclose(impl_->gz);
    } else if (impl_->plain.is_open()) {
        impl_->plain.close();
    }
    std::remove(impl_->tmp_path.c_str());
}

void RecordWriter::write(const Document& doc) { write_line(doc_to_line(doc)); }

void RecordWriter::write_line(const std::string& line) {
    impl_->put(line);
    impl_->put("\n");
    ++count_;
}

size_t RecordWriter::commit() {
    if (committed_) return count_;
    if (impl_->use_gz) {
        const int rc = gzclose(impl_->gz);
        impl_->gz = nullptr;
        if (rc != Z_OK) {
            std::remove(impl_->tmp_path.c_str());
            throw Error("io", "close failed: " + impl_->tmp_path);
        }
    } else {
        impl_->plain.close();
        if (impl_->plain.fail()) {
            std::remove(impl_->tmp_path.c_str());
            throw Error("io", "close failed: " + impl_->tmp_path);
        }
    }
    if (std::rename(impl_->tmp_path.c_str(), impl_->final_path.c_str()) != 0) {
        std::remove(impl_->tmp_path.c_str());
        throw Error("io", "rename failed: " + impl_->final_path);
    }
    committed_ = true;
    return count_;
}

std::vector<Document> read_records(const std::string& path,
                                   std::vector<LineError>* errors) {
    RecordReader reader(path);
    std::vector<Document> docs;
    Document doc;
    while (reader.next(doc)) docs.push_back(std::move(doc));
    if (errors != nullptr) *errors = reader.errors();
    return docs;
}

size_t write_records(const std::vector<Document>& docs, const std::string& path) {
    RecordWriter writer(path);
    for (const Document& doc : docs) writer.write(doc);
    return writer.commit();
}

}  // namespace curate
