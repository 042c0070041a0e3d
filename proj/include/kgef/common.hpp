#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kgef {

/// Upstream bibliographic services a record or statement can be derived from.
enum class Source { WD, OL, GR, GB };

inline constexpr Source kAllSources[] = {Source::WD, Source::OL, Source::GR, Source::GB};

std::string_view to_string(Source source);

/// Case-insensitive; accepts "WD", "wd", ...
std::optional<Source> parse_source(std::string_view text);

enum class Gender { Male, Female, Nonbinary, Unknown };

std::string_view to_string(Gender gender);
std::optional<Gender> parse_gender(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string lowercase_ascii(std::string_view text);
std::string trim(std::string_view text);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// Fixed-point formatting, e.g. format_fixed(91.05, 1) == "91.1".
std::string format_fixed(double value, int decimals);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace kgef
