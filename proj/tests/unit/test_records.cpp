#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curate/core/records.hpp"
#include "curate/error.hpp"
#include "synth.hpp"

using namespace curate;

TEST_CASE("doc_to_line emits a fixed key order") {
    Document doc;
    doc.id = "d1";
    doc.source = "news";
    doc.domain = "example.com";
    doc.text = "hello";
    doc.timestamp = 1700000000;
    doc.meta["lang"] = "en";
    CHECK(doc_to_line(doc) ==
          R"({"id":"d1","source":"news","domain":"example.com","text":"hello",)"
          R"("timestamp":1700000000,"meta":{"lang":"en"}})");

    Document bare;
    bare.id = "d2";
    CHECK(doc_to_line(bare) == R"({"id":"d2","source":"","domain":"","text":""})");
}

TEST_CASE("doc_from_line round-trips fuzzed documents") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 300; ++i) {
        Document doc;
        doc.id = "id" + std::to_string(rng());
        doc.source = (i % 3 == 0) ? "" : "src" + std::to_string(rng() % 5);
        doc.domain = (i % 4 == 0) ? "" : "d" + std::to_string(rng() % 9) + ".example.com";
        doc.text = synth::prose(rng, rng() % 300);
        if (i % 2 == 0) doc.timestamp = static_cast<int64_t>(rng() % 2000000000);
        if (i % 5 == 0) doc.meta["k" + std::to_string(rng() % 3)] = "v";
        const Document back = doc_from_line(doc_to_line(doc));
        CHECK(back.id == doc.id);
        CHECK(back.source == doc.source);
        CHECK(back.domain == doc.domain);
        CHECK(back.text == doc.text);
        CHECK(back.timestamp == doc.timestamp);
        CHECK(back.meta == doc.meta);
    }
}

TEST_CASE("doc_from_line rejects schema violations") {
    CHECK_THROWS_AS(doc_from_line("not json"), Error);
    CHECK_THROWS_AS(doc_from_line("[1,2]"), Error);
    CHECK_THROWS_AS(doc_from_line(R"({"text":"x"})"), Error);       // id missing
    CHECK_THROWS_AS(doc_from_line(R"({"id":""})"), Error);          // id empty
    CHECK_THROWS_AS(doc_from_line(R"({"id":7})"), Error);           // id not string
    CHECK_THROWS_AS(doc_from_line(R"({"id":"a","text":3})"), Error);
    CHECK_THROWS_AS(doc_from_line(R"({"id":"a","timestamp":"x"})"), Error);
    CHECK_THROWS_AS(doc_from_line(R"({"id":"a","meta":[]})"), Error);
    CHECK_THROWS_AS(doc_from_line(R"({"id":"a","domain":"http://x.com/p"})"), Error);
    try {
        doc_from_line(R"({"id":"a","text":3})");
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "malformed_record");
    }
}

TEST_CASE("doc_from_json lowercases domains and keeps unknown fields") {
    const Document doc = doc_from_line(
        R"({"id":"a","domain":"WWW.Example.COM","crawl":"2024-11","depth":3})");
    CHECK(doc.domain == "www.example.com");
    CHECK(doc.meta.at("crawl") == "2024-11");
    CHECK(doc.meta.at("depth") == "3");
}

TEST_CASE("doc_from_json accepts null timestamp as absent") {
    const Document doc = doc_from_line(R"({"id":"a","timestamp":null})");
    CHECK_FALSE(doc.timestamp.has_value());
    CHECK(doc.effective_timestamp() == 0);
}

TEST_CASE("reader skips malformed lines and reports them") {
    synth::TempDir tmp("records");
    const std::string path = tmp.file("mixed.jsonl");
    {
        std::ofstream out(path);
        out << R"({"id":"a","text":"one"})" << "\n";
        out << "garbage\n";
        out << "\n";  // blank lines are skipped silently
        out << R"({"id":"b","text":"two"})" << "\n";
        out << R"({"text":"no id"})" << "\n";
    }
    RecordReader reader(path);
    std::vector<std::string> ids;
    Document doc;
    while (reader.next(doc)) ids.push_back(doc.id);
    CHECK(ids == std::vector<std::string>{"a", "b"});
    REQUIRE(reader.errors().size() == 2);
    CHECK(reader.errors()[0].line_number == 2);
    CHECK(reader.errors()[1].line_number == 5);
}

TEST_CASE("reader throws on unreadable path") {
    CHECK_THROWS_AS(RecordReader("/nonexistent/nope.jsonl"), Error);
}

TEST_CASE("writer commits atomically and cleans up on abort") {
    synth::TempDir tmp("records");
    const std::string path = tmp.file("out.jsonl");
    Document doc;
    doc.id = "a";
    doc.text = "body";
    {
        RecordWriter writer(path);
        writer.write(doc);
        CHECK_FALSE(std::filesystem::exists(path));  // not yet committed
        CHECK(writer.commit() == 1);
    }
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    const std::string aborted = tmp.file("aborted.jsonl");
    {
        RecordWriter writer(aborted);
        writer.write(doc);
    }
    CHECK_FALSE(std::filesystem::exists(aborted));
    CHECK_FALSE(std::filesystem::exists(aborted + ".tmp"));
}

TEST_CASE("gzip output reads back transparently") {
    synth::TempDir tmp("records");
    const std::string path = tmp.file("out.jsonl.gz");
    std::vector<Document> docs(3);
    for (size_t i = 0; i < docs.size(); ++i) {
        docs[i].id = "g" + std::to_string(i);
        docs[i].text = std::string(200, 'x') + std::to_string(i);
    }
    CHECK(write_records(docs, path) == 3);

    // really compressed: magic bytes and smaller than the plain text
    std::ifstream in(path, std::ios::binary);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    CHECK(static_cast<unsigned char>(magic[0]) == 0x1F);
    CHECK(static_cast<unsigned char>(magic[1]) == 0x8B);

    std::vector<LineError> errors;
    const std::vector<Document> back = read_records(path, &errors);
    CHECK(errors.empty());
    REQUIRE(back.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back[i].id == docs[i].id);
        CHECK(back[i].text == docs[i].text);
    }
}

TEST_CASE("records with invalid utf-8 text are rejected") {
    nlohmann::json j;
    j["id"] = "a";
    j["text"] = std::string("\xC3\x28");
    CHECK_THROWS_AS(doc_from_json(j), Error);
    // raw invalid bytes never survive the parse path either
    CHECK_THROWS_AS(
        doc_from_line(std::string(R"({"id":"a","text":")") + "\xC3\x28" + R"("})"),
        Error);
}
