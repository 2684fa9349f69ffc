#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cskd {

using Tokens = std::vector<std::string>;

// Clipped unigram precision times brevity penalty. The reference length
// for the penalty is the one closest to the candidate's, ties going to the
// shorter. Empty candidate scores 0; empty reference set throws cskd::Error.
double bleu1(const Tokens& candidate, const std::vector<Tokens>& references);

// Same on text, tokenized with bleu_tokens (case-folded whitespace split).
double bleu1(std::string_view candidate, const std::vector<std::string>& references);

inline constexpr double kUniquenessThreshold = 0.5;

struct GroupedText {
  std::string text;
  std::string group;  // e.g. source head + instance
};

// An item is unique when bleu1 against every other item of its group is
// below `threshold`, i.e. bleu1(x, C_x) < threshold with C_x the other group
// members. Items alone in their group are unique. Empty input -> 1.
double soft_uniqueness_ratio(const std::vector<GroupedText>& items,
                             double threshold = kUniquenessThreshold);

struct HeadPair {
  std::string new_head;     // h_{i'}
  std::string source_head;  // h_o
};

// Fraction of pairs with bleu1(new_head, {source_head}) < threshold.
// Empty input -> 1.
double novelty_ratio(const std::vector<HeadPair>& pairs,
                     double threshold = kUniquenessThreshold);

}  // namespace cskd
