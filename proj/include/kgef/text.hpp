#pragma once

#include <string>
#include <string_view>

namespace kgef {

/// Unicode case folding of a UTF-8 string. Diacritics are kept as-is.
/// Ill-formed UTF-8 sequences are replaced by U+FFFD.
std::string casefold(std::string_view utf8);

/// Name key used for exact matching across sources: case folded, leading and
/// trailing Unicode whitespace removed, internal runs collapsed to one space.
std::string normalize_name(std::string_view utf8);

}  // namespace kgef
