#include "curate/dedup/signature_cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "curate/error.hpp"

namespace curate::dedup {

namespace {

constexpr char kMagic[8] = {'C', 'U', 'R', 'S', 'I', 'G', '0', '1'};

#pragma pack(push, 1)
struct CacheHeader {
    char magic[8];
    uint32_t num_perm;
    uint32_t shingle_n;
    uint64_t seed;
    uint64_t record_count;
};
#pragma pack(pop)
static_assert(sizeof(CacheHeader) == 32, "cache header must be 32 bytes");

}  // namespace

void write_signature_cache(const std::string& path, const DedupConfig& cfg,
                           const std::vector<DedupSignature>& sigs) {
    cfg.validate();
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot open for writing: " + tmp);

    CacheHeader header{};
    std::memcpy(header.magic, kMagic, sizeof(kMagic));
    header.num_perm = static_cast<uint32_t>(cfg.num_perm);
    header.shingle_n = static_cast<uint32_t>(cfg.shingle_n);
    header.seed = cfg.seed;
    header.record_count = sigs.size();
    out.write(reinterpret_cast<const char*>(&header), sizeof(header));

    for (const DedupSignature& sig : sigs) {
        if (!sig.values.empty() && sig.values.size() != cfg.num_perm) {
            out.close();
            std::remove(tmp.c_str());
            throw Error("signature_mismatch",
                        "signature length != num_perm for " + sig.doc_id);
        }
        const uint32_t id_len = static_cast<uint32_t>(sig.doc_id.size());
        const uint32_t value_count = static_cast<uint32_t>(sig.values.size());
        out.write(reinterpret_cast<const char*>(&id_len), sizeof(id_len));
        out.write(sig.doc_id.data(), id_len);
        out.write(reinterpret_cast<const char*>(&value_count), sizeof(value_count));
        out.write(reinterpret_cast<const char*>(sig.values.data()),
                  static_cast<std::streamsize>(sig.values.size() * sizeof(uint64_t)));
    }
    out.close();
    if (out.fail() || std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("io", "cannot write signature cache: " + path);
    }
}

std::vector<DedupSignature> read_signature_cache(const std::string& path,
                                                 const DedupConfig& cfg) {
    cfg.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("unreadable_file", "cannot open signature cache: " + path);

    CacheHeader header{};
    in.read(reinterpret_cast<char*>(&header), sizeof(header));
    if (!in || std::memcmp(header.magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("cache_mismatch", "not a signature cache: " + path);
    }
    if (header.num_perm != cfg.num_perm || header.shingle_n != cfg.shingle_n ||
        header.seed != cfg.seed) {
        throw Error("cache_mismatch",
                    "signature cache was built with different parameters: " + path);
    }

    std::vector<DedupSignature> sigs;
    sigs.reserve(header.record_count);
    for (uint64_t r = 0; r < header.record_count; ++r) {
        uint32_t id_len = 0;
        in.read(reinterpret_cast<char*>(&id_len), sizeof(id_len));
        if (!in) throw Error("io", "truncated signature cache: " + path);
        DedupSignature sig;
        sig.seed = cfg.seed;
        sig.doc_id.resize(id_len);
        in.read(sig.doc_id.data(), id_len);
        uint32_t value_count = 0;
        in.read(reinterpret_cast<char*>(&value_count), sizeof(value_count));
        if (!in || (value_count != 0 && value_count != cfg.num_perm)) {
            throw Error("io", "truncated signature cache: " + path);
        }
        sig.values.resize(value_count);
        in.read(reinterpret_cast<char*>(sig.values.data()),
                static_cast<std::streamsize>(value_count * sizeof(uint64_t)));
        if (!in) throw Error("io", "truncated signature cache: " + path);
        sigs.push_back(std::move(sig));
    }
    return sigs;
}

}  // namespace curate::dedup
