#pragma once

#include <cstdint>

namespace curate {

// Character classes backing the cleaning and heuristic stages. Category
// membership comes from generated range tables; the CJK/alnum class is the
// explicit set documented here rather than a full Unicode property.

// Unicode general categories P* and S*.
bool is_punct_or_symbol(uint32_t cp);

// Category Cc.
bool is_control(uint32_t cp);

// Space-like: Zs/Zl/Zp plus the whitespace control characters (tab, LF...).
bool is_space(uint32_t cp);

// CJK unified ideographs (base block, extension A, extensions B-F),
// ASCII alphanumerics, and fullwidth digits.
bool is_cjk_or_alnum(uint32_t cp);

}  // namespace curate
