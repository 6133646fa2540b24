#include "lexer.hpp"

#include <cctype>

#include "nl2gql/error.hpp"

namespace nl2gql::gql::detail {

namespace {

bool word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

} // namespace

std::vector<Token> tokenize(std::string_view in) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < in.size()) {
        const auto c = static_cast<unsigned char>(in[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (word_start(c)) {
            while (i < in.size() && word_char(static_cast<unsigned char>(in[i]))) ++i;
            out.push_back({TokenKind::Word, std::string(in.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(c)) {
            while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
            bool is_float = false;
            if (i + 1 < in.size() && in[i] == '.' && std::isdigit(static_cast<unsigned char>(in[i + 1]))) {
                is_float = true;
                ++i;
                while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
            }
            if (i < in.size() && (in[i] == 'e' || in[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < in.size() && (in[j] == '+' || in[j] == '-')) ++j;
                if (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j]))) {
                    is_float = true;
                    i = j;
                    while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
                }
            }
            if (i < in.size() && word_start(static_cast<unsigned char>(in[i]))) {
                throw ParseError(i, "malformed number");
            }
            out.push_back({is_float ? TokenKind::Float : TokenKind::Int,
                           std::string(in.substr(start, i - start)), start});
            continue;
        }
        if (c == '\'' || c == '"') {
            const char quote = static_cast<char>(c);
            ++i;
            std::string body;
            bool closed = false;
            while (i < in.size()) {
                char ch = in[i];
                if (ch == '\\') {
                    if (i + 1 >= in.size()) break;
                    char esc = in[i + 1];
                    switch (esc) {
                    case 'n': body += '\n'; break;
                    case 't': body += '\t'; break;
                    case '\\': body += '\\'; break;
                    case '\'': body += '\''; break;
                    case '"': body += '"'; break;
                    default: throw ParseError(i, std::string("unknown escape \\") + esc);
                    }
                    i += 2;
                    continue;
                }
                if (ch == quote) {
                    closed = true;
                    ++i;
                    break;
                }
                body += ch;
                ++i;
            }
            if (!closed) throw ParseError(start, "unterminated string literal");
            out.push_back({TokenKind::String, std::move(body), start});
            continue;
        }
        if (i + 1 < in.size()) {
            std::string_view two = in.substr(i, 2);
            if (two == "<>" || two == "!=" || two == "<=" || two == ">=") {
                out.push_back({TokenKind::Punct, std::string(two), start});
                i += 2;
                continue;
            }
        }
        static constexpr std::string_view kSingles = "()[]{}:,.-+><=;";
        if (kSingles.find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back({TokenKind::Punct, std::string(1, static_cast<char>(c)), start});
            ++i;
            continue;
        }
        throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    out.push_back({TokenKind::End, "", in.size()});
    return out;
}

} // namespace nl2gql::gql::detail
