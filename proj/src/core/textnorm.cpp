#include "curate/core/textnorm.hpp"

#include <unicode/normalizer2.h>
#include <unicode/stringpiece.h>
#include <unicode/unistr.h>

#include "curate/error.hpp"

namespace curate {

namespace {

const icu::Normalizer2& nfc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw Error("unicode_data", "NFC normalizer unavailable");
    }
    return *n;
}

}  // namespace

bool is_nfc(std::string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    const UBool ok = nfc_instance().isNormalizedUTF8(
        icu::StringPiece(s.data(), static_cast<int32_t>(s.size())), status);
    return U_SUCCESS(status) && ok;
}

std::string nfc(std::string_view s) {
    if (is_nfc(s)) return std::string(s);
    const icu::UnicodeString u = icu::UnicodeString::fromUTF8(
        icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    UErrorCode status = U_ZERO_ERROR;
    const icu::UnicodeString normalized = nfc_instance().normalize(u, status);
    if (U_FAILURE(status)) {
        throw Error("unicode_data", "NFC normalization failed");
    }
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

}  // namespace curate
