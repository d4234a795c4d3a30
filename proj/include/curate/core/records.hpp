#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curate/core/document.hpp"

namespace curate {

// Malformed input line, reported rather than silently dropped.
struct LineError {
    size_t line_number = 0;  // 1-based
    std::string message;
};

nlohmann::ordered_json doc_to_json(const Document& doc);
std::string doc_to_line(const Document& doc);  // single line, no newline

// Throws Error("malformed_record") on schema violations. Unknown top-level
// fields are preserved into meta, never dropped.
Document doc_from_json(const nlohmann::json& j);
Document doc_from_line(const std::string& line);

// Streaming reader over line-delimited records. Accepts plain and
// gzip-compressed files transparently. Malformed lines are collected into
// errors() and skipped; only unreadable files throw.
class RecordReader {
  public:
    explicit RecordReader(const std::string& path);
    ~RecordReader();
    RecordReader(const RecordReader&) = delete;
    RecordReader& operator=(const RecordReader&) = delete;

    // Fills doc and returns true, or returns false at end of input.
    bool next(Document& doc);

    const std::vector<LineError>& errors() const { return errors_; }
    size_t lines_read() const { return line_no_; }

  private:
    bool next_line(std::string& line);

    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<LineError> errors_;
    size_t line_no_ = 0;
};

// Writes to "<path>.tmp" and renames into place on commit(). A writer
// destroyed without commit() removes the partial file. Paths ending in .gz
// are gzip-compressed.
class RecordWriter {
  public:
    explicit RecordWriter(const std::string& path);
    ~RecordWriter();
    RecordWriter(const RecordWriter&) = delete;
    RecordWriter& operator=(const RecordWriter&) = delete;

    void write(const Document& doc);
    void write_line(const std::string& line);  // pre-serialized record

    // Flushes, closes and renames the temp file; returns the record count.
    size_t commit();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    size_t count_ = 0;
    bool committed_ = false;
};

// Whole-file helpers over the streaming classes.
std::vector<Document> read_records(const std::string& path,
                                   std::vector<LineError>* errors = nullptr);
size_t write_records(const std::vector<Document>& docs, const std::string& path);

}  // namespace curate
