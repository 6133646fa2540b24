#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nl2gql::utf8 {

// Byte offsets of each code point start, plus a final entry == text.size().
// Invalid bytes are treated as single-byte code points.
std::vector<std::size_t> boundaries(std::string_view text);

std::vector<char32_t> decode(std::string_view text);
std::string encode(char32_t cp);

inline std::size_t length(std::string_view text) { return boundaries(text).size() - 1; }

// Substring by code point index and count.
std::string substr(std::string_view text, std::size_t first, std::size_t count);

bool is_cjk(char32_t cp);

} // namespace nl2gql::utf8
