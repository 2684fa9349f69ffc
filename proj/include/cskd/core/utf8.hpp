#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Span offsets throughout the project count Unicode scalar values, while
// strings are stored as UTF-8. These helpers translate between the two.
namespace cskd::utf8 {

bool valid(std::string_view s);

// Number of scalar values. Requires valid UTF-8.
std::size_t length(std::string_view s);

// Byte offset of the scalar value at `index`; index == length(s) maps to
// s.size(). Throws cskd::Error when out of range.
std::size_t byte_offset(std::string_view s, std::size_t index);

// Substring by scalar-value interval [start, end).
std::string substr(std::string_view s, std::size_t start, std::size_t end);

}  // namespace cskd::utf8
