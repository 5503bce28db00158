#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ccv::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Letters, digits and any byte of a multibyte UTF-8 sequence.
constexpr bool is_word_char(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u >= 0x80;
}

// Whitespace-separated words with surrounding punctuation (other than
// apostrophes and hyphens inside a word) stripped.
std::vector<std::string> words(std::string_view s);

}  // namespace ccv::text

namespace ccv {

// Non-blank lines of a text file, trimmed.
std::vector<std::string> text_lines(std::string_view contents);

}  // namespace ccv
