#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cskd::text {

bool is_space(char c);

std::string_view trim(std::string_view s);

// ASCII case folding; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view s);

// Trims and replaces every internal whitespace run with a single space.
std::string collapse_whitespace(std::string_view s);

// Dedup/match key: case-folded and whitespace-collapsed.
std::string normalize_key(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace cskd::text
