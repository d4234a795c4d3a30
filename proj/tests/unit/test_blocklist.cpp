#include <doctest.h>

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "curate/error.hpp"
#include "curate/ingest/blocklist.hpp"
#include "synth.hpp"

using namespace curate;
using ingest::Blocklist;
using ingest::BlocklistWarning;
using ingest::domain_blocked;
using ingest::load_blocklist;
using ingest::safety_filter;

namespace {

Blocklist write_and_load(const std::string& body,
                         std::vector<BlocklistWarning>* warnings = nullptr) {
    static synth::TempDir tmp("blocklist");
    static int counter = 0;
    const std::string path = tmp.file("bl" + std::to_string(counter++) + ".txt");
    std::ofstream(path) << body;
    return load_blocklist(path, warnings);
}

}  // namespace

TEST_CASE("load_blocklist parses comments, blanks, and case") {
    const Blocklist bl = write_and_load(
        "# comment\n"
        "\n"
        "Bad.Example.COM\r\n"
        "  spaced.example.org  \n"
        "# another comment\n"
        "second.example.net\n");
    CHECK(bl.entries ==
          std::set<std::string>{"bad.example.com", "spaced.example.org",
                                "second.example.net"});
}

TEST_CASE("load_blocklist warns on malformed entries and keeps the rest") {
    std::vector<BlocklistWarning> warnings;
    const Blocklist bl = write_and_load(
        "good.example.com\n"
        "http://scheme.example.com\n"
        "path.example.com/evil\n"
        "port.example.com:8080\n"
        "user@host.example.com\n"
        "fine.example.org\n",
        &warnings);
    CHECK(bl.entries ==
          std::set<std::string>{"good.example.com", "fine.example.org"});
    REQUIRE(warnings.size() == 4);
    CHECK(warnings[0].line_number == 2);
    CHECK(warnings[3].line_number == 5);
}

TEST_CASE("load_blocklist throws on unreadable path") {
    CHECK_THROWS_AS(load_blocklist("/nonexistent/bl.txt"), Error);
}

TEST_CASE("domain matching is exact or dot-boundary suffix") {
    Blocklist bl;
    bl.entries = {"bad.example.com", "evil.org"};
    CHECK(domain_blocked("bad.example.com", bl));
    CHECK(domain_blocked("sub.bad.example.com", bl));
    CHECK(domain_blocked("a.b.sub.bad.example.com", bl));
    CHECK(domain_blocked("evil.org", bl));
    CHECK_FALSE(domain_blocked("notbad.example.com", bl));     // no dot boundary
    CHECK_FALSE(domain_blocked("bad.example.com.au", bl));     // suffix, not domain
    CHECK_FALSE(domain_blocked("example.com", bl));            // parent not blocked
    CHECK_FALSE(domain_blocked("", bl));
    CHECK_FALSE(domain_blocked("anything.com", Blocklist{}));
}

TEST_CASE("domain matching agrees with a brute-force oracle") {
    const std::vector<std::string> labels = {"a", "bb", "evil", "com", "org"};
    std::mt19937_64 rng(77);
    Blocklist bl;
    for (int i = 0; i < 12; ++i) {
        std::string entry = labels[rng() % labels.size()];
        const size_t extra = rng() % 2 + 1;
        for (size_t k = 0; k < extra; ++k) {
            entry += "." + labels[rng() % labels.size()];
        }
        bl.entries.insert(entry);
    }
    auto oracle = [&bl](const std::string& domain) {
        if (domain.empty()) return false;
        for (const std::string& entry : bl.entries) {
            if (domain == entry) return true;
            if (domain.size() > entry.size() + 1 &&
                domain.compare(domain.size() - entry.size(), entry.size(), entry) ==
                    0 &&
                domain[domain.size() - entry.size() - 1] == '.') {
                return true;
            }
        }
        return false;
    };
    for (int iter = 0; iter < 4000; ++iter) {
        std::string domain = labels[rng() % labels.size()];
        const size_t parts = rng() % 4;
        for (size_t k = 0; k < parts; ++k) {
            domain += "." + labels[rng() % labels.size()];
        }
        CAPTURE(domain);
        CHECK(domain_blocked(domain, bl) == oracle(domain));
    }
}

TEST_CASE("safety_filter verdicts carry the blocked_domain reason") {
    Blocklist bl;
    bl.entries = {"bad.example.com"};
    Document doc;
    doc.id = "d";
    doc.domain = "sub.bad.example.com";
    const FilterVerdict blocked = safety_filter(doc, bl);
    CHECK_FALSE(blocked.pass);
    CHECK(blocked.stage == Stage::safety);
    CHECK(blocked.reason == "blocked_domain");

    doc.domain = "fine.example.com";
    CHECK(safety_filter(doc, bl).pass);
    doc.domain = "";
    CHECK(safety_filter(doc, bl).pass);
}
