#include "cskd/core/tokens.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "cskd/core/text.hpp"

namespace cskd {
namespace {

// Sorted for binary search.
constexpr std::array<std::string_view, 48> kStopwords = {
    "a",     "about", "an",      "and",     "are",     "as",   "at",
    "be",    "been",  "but",     "by",      "do",      "does", "for",
    "from",  "had",   "has",     "have",    "he",      "her",  "his",
    "in",    "into",  "is",      "it",      "its",     "not",  "of",
    "on",    "or",    "out",     "personx", "persony", "personz", "she",
    "so",    "that",  "the",     "their",   "them",    "they", "this",
    "to",    "up",    "was",     "were",    "will",    "with",
};

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || u >= 0x80;
}

}  // namespace

bool is_stopword(std::string_view lowercase_token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(),
                            lowercase_token);
}

std::vector<std::string> content_tokens(std::string_view input) {
  std::vector<std::string> out;
  const std::string lowered = text::to_lower(input);
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && !is_word_byte(lowered[i])) ++i;
    std::size_t j = i;
    while (j < lowered.size() && is_word_byte(lowered[j])) ++j;
    if (j > i) {
      std::string tok = lowered.substr(i, j - i);
      if (!is_stopword(tok)) out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

bool shares_content_token(std::string_view a, std::string_view b) {
  const auto ta = content_tokens(a);
  if (ta.empty()) return false;
  const std::set<std::string> sa(ta.begin(), ta.end());
  for (const auto& t : content_tokens(b)) {
    if (sa.count(t) != 0) return true;
  }
  return false;
}

std::vector<std::string> bleu_tokens(std::string_view input) {
  return text::split_whitespace(text::to_lower(input));
}

}  // namespace cskd
