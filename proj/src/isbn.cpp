#include "kgef/isbn.hpp"

#include <cctype>

namespace kgef::isbn {
namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

char isbn13_check_digit(std::string_view first12) {
  int sum = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    sum += (first12[i] - '0') * (i % 2 == 0 ? 1 : 3);
  }
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

bool valid10(std::string_view s) {
  if (s.size() != 10 || !all_digits(s.substr(0, 9))) return false;
  const char last = s[9];
  if (!(last == 'X' || (last >= '0' && last <= '9'))) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 9; ++i) sum += (s[i] - '0') * static_cast<int>(10 - i);
  sum += last == 'X' ? 10 : last - '0';
  return sum % 11 == 0;
}

bool valid13(std::string_view s) {
  return s.size() == 13 && all_digits(s) && isbn13_check_digit(s.substr(0, 12)) == s[12];
}

}  // namespace

std::string normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(c == 'x' ? 'X' : c);
  }
  return out;
}

bool is_valid(std::string_view normalized) {
  return valid10(normalized) || valid13(normalized);
}

std::optional<std::string> to_isbn13(std::string_view raw) {
  const std::string s = normalize(raw);
  if (valid13(s)) return s;
  if (!valid10(s)) return std::nullopt;
  std::string out = "978" + s.substr(0, 9);
  out.push_back(isbn13_check_digit(out));
  return out;
}

}  // namespace kgef::isbn
