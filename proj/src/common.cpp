#include "kgef/common.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace kgef {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::WD: return "WD";
    case Source::OL: return "OL";
    case Source::GR: return "GR";
    case Source::GB: return "GB";
  }
  return "?";
}

std::optional<Source> parse_source(std::string_view text) {
  const std::string lowered = lowercase_ascii(text);
  if (lowered == "wd") return Source::WD;
  if (lowered == "ol") return Source::OL;
  if (lowered == "gr") return Source::GR;
  if (lowered == "gb") return Source::GB;
  return std::nullopt;
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Nonbinary: return "nonbinary";
    case Gender::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Gender> parse_gender(std::string_view text) {
  const std::string lowered = lowercase_ascii(text);
  if (lowered == "male") return Gender::Male;
  if (lowered == "female") return Gender::Female;
  if (lowered == "nonbinary") return Gender::Nonbinary;
  if (lowered == "unknown") return Gender::Unknown;
  return std::nullopt;
}

std::string lowercase_ascii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view text) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto begin = std::find_if_not(text.begin(), text.end(), is_space);
  auto end = std::find_if_not(text.rbegin(), std::string_view::reverse_iterator(begin), is_space).base();
  return std::string(begin, end);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back().push_back(c);
    }
  }
  return fields;
}

}  // namespace kgef
