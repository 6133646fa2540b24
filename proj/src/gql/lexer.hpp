#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nl2gql::gql::detail {

enum class TokenKind { Word, Int, Float, String, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;    // decoded string literal body, or raw lexeme
    std::size_t offset = 0;
};

// Punctuation tokens: ( ) [ ] { } : , . - + > < = ; and two-char <> != <= >=
std::vector<Token> tokenize(std::string_view input);

} // namespace nl2gql::gql::detail
