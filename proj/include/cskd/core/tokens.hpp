#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cskd {

// Version tag of the stopword list below; bump when the list changes so
// downstream datasets can record which filter produced them.
inline constexpr std::string_view kStopwordListVersion = "v1";

bool is_stopword(std::string_view lowercase_token);

// Lowercased alphanumeric runs with stopwords and the PersonX/Y/Z
// placeholders removed. Bytes >= 0x80 count as alphanumeric so non-ASCII
// words stay whole. Used for the "no common words" checks in synthesis.
std::vector<std::string> content_tokens(std::string_view text);

// True when the two texts share at least one content token.
bool shares_content_token(std::string_view a, std::string_view b);

// Surface tokens for BLEU: case-folded, whitespace-split, nothing removed.
std::vector<std::string> bleu_tokens(std::string_view text);

}  // namespace cskd
