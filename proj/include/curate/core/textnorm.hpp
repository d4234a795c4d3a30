#pragma once

#include <string>
#include <string_view>

namespace curate {

// Unicode normalization form C over UTF-8 text. Already-normalized input is
// returned unchanged without an intermediate copy.
std::string nfc(std::string_view s);

bool is_nfc(std::string_view s);

}  // namespace curate
