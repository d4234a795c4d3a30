#pragma once

#include <set>
#include <string>
#include <vector>

#include "curate/core/document.hpp"

namespace curate::ingest {

// Domains excluded for safety. Entries are lowercase registrable domains;
// matching is exact or dot-boundary suffix (an entry blocks all its
// subdomains).
struct Blocklist {
    std::set<std::string> entries;
    std::string source_path;
};

struct BlocklistWarning {
    size_t line_number = 0;  // 1-based
    std::string message;
};

// File format: one domain per line, '#' starts a comment line, blank lines
// ignored. Entries are lowercased and trimmed; entries carrying a scheme,
// path, port, or userinfo are skipped with a warning.
Blocklist load_blocklist(const std::string& path,
                         std::vector<BlocklistWarning>* warnings = nullptr);

// True when domain equals an entry or is a subdomain of one.
bool domain_blocked(const std::string& domain, const Blocklist& bl);

// pass=false with reason "blocked_domain" for blocked domains; documents
// with an empty domain always pass.
FilterVerdict safety_filter(const Document& doc, const Blocklist& bl);

}  // namespace curate::ingest
