#include "curate/ingest/blocklist.hpp"

#include <cctype>
#include <fstream>

#include "curate/error.hpp"

namespace curate::ingest {

namespace {

std::string trim_ascii(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool entry_shape_ok(const std::string& entry) {
    for (char c : entry) {
        if (c == '/' || c == ':' || c == '@' || c == ' ' || c == '\t') return false;
    }
    return !entry.empty();
}

}  // namespace

Blocklist load_blocklist(const std::string& path,
                         std::vector<BlocklistWarning>* warnings) {
    std::ifstream in(path);
    if (!in) throw Error("unreadable_file", "cannot open blocklist: " + path);

    Blocklist bl;
    bl.source_path = path;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string entry = trim_ascii(line);
        if (entry.empty() || entry[0] == '#') continue;
        for (char& c : entry) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (!entry_shape_ok(entry)) {
            if (warnings != nullptr) {
                warnings->push_back(
                    {line_no, "skipped entry with scheme, path, port, or userinfo: " +
                                  entry});
            }
            continue;
        }
        bl.entries.insert(entry);
    }
    return bl;
}

bool domain_blocked(const std::string& domain, const Blocklist& bl) {
    if (domain.empty() || bl.entries.empty()) return false;
    if (bl.entries.count(domain) != 0) return true;
    // Subdomain match: any dot-boundary suffix of the domain is an entry.
    for (size_t i = 0; i < domain.size(); ++i) {
        if (domain[i] == '.' && bl.entries.count(domain.substr(i + 1)) != 0) {
            return true;
        }
    }
    return false;
}

FilterVerdict safety_filter(const Document& doc, const Blocklist& bl) {
    if (domain_blocked(doc.domain, bl)) {
        return FilterVerdict::failed(Stage::safety, "blocked_domain");
    }
    return FilterVerdict::passed(Stage::safety);
}

}  // namespace curate::ingest
