#include "cskd/core/utf8.hpp"

#include "cskd/core/error.hpp"

namespace cskd::utf8 {
namespace {

// Length of the sequence starting with lead byte `c`, or 0 if `c` cannot
// start a sequence.
int sequence_length(unsigned char c) {
  if (c < 0x80) return 1;
  if (c >= 0xC2 && c <= 0xDF) return 2;
  if (c >= 0xE0 && c <= 0xEF) return 3;
  if (c >= 0xF0 && c <= 0xF4) return 4;
  return 0;
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

bool valid(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    const int n = sequence_length(lead);
    if (n == 0 || i + n > s.size()) return false;
    for (int k = 1; k < n; ++k) {
      if (!is_continuation(static_cast<unsigned char>(s[i + k]))) return false;
    }
    if (n >= 3) {
      const auto second = static_cast<unsigned char>(s[i + 1]);
      // overlong forms, surrogates, and values above U+10FFFF
      if (lead == 0xE0 && second < 0xA0) return false;
      if (lead == 0xED && second > 0x9F) return false;
      if (lead == 0xF0 && second < 0x90) return false;
      if (lead == 0xF4 && second > 0x8F) return false;
    }
    i += n;
  }
  return true;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if (!is_continuation(static_cast<unsigned char>(c))) ++n;
  }
  return n;
}

std::size_t byte_offset(std::string_view s, std::size_t index) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_continuation(static_cast<unsigned char>(s[i]))) continue;
    if (seen == index) return i;
    ++seen;
  }
  if (seen == index) return s.size();
  throw Error("character offset " + std::to_string(index) +
              " beyond string of length " + std::to_string(seen));
}

std::string substr(std::string_view s, std::size_t start, std::size_t end) {
  const std::size_t b = byte_offset(s, start);
  const std::size_t e = byte_offset(s, end);
  return std::string(s.substr(b, e - b));
}

}  // namespace cskd::utf8
