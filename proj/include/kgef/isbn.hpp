#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace kgef::isbn {

/// Strips hyphens and whitespace and upper-cases a trailing 'x'.
std::string normalize(std::string_view raw);

/// Checksum test on an already normalized ISBN-10 or ISBN-13.
bool is_valid(std::string_view normalized);

/// Canonical ISBN-13 for a raw ISBN-10 or ISBN-13, or nullopt when the
/// checksum fails. ISBN-10 input gets the 978 prefix and a recomputed check digit.
std::optional<std::string> to_isbn13(std::string_view raw);

}  // namespace kgef::isbn
