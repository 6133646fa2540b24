#include "nl2gql/utf8.hpp"

namespace nl2gql::utf8 {

namespace {

std::size_t sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 1;
}

} // namespace

std::vector<std::size_t> boundaries(std::string_view text) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    while (i < text.size()) {
        out.push_back(i);
        std::size_t len = sequence_length(static_cast<unsigned char>(text[i]));
        if (i + len > text.size()) len = 1;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                len = 1;
                break;
            }
        }
        i += len;
    }
    out.push_back(text.size());
    return out;
}

std::vector<char32_t> decode(std::string_view text) {
    std::vector<char32_t> out;
    auto b = boundaries(text);
    out.reserve(b.size() - 1);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
        const std::size_t start = b[k];
        const std::size_t len = b[k + 1] - start;
        auto lead = static_cast<unsigned char>(text[start]);
        char32_t cp;
        if (len == 1) {
            cp = lead;
        } else {
            cp = lead & (0xFF >> (len + 1));
            for (std::size_t j = 1; j < len; ++j) {
                cp = (cp << 6) | (static_cast<unsigned char>(text[start + j]) & 0x3F);
            }
        }
        out.push_back(cp);
    }
    return out;
}

std::string encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

std::string substr(std::string_view text, std::size_t first, std::size_t count) {
    auto b = boundaries(text);
    const std::size_t n = b.size() - 1;
    if (first >= n) return {};
    const std::size_t last = std::min(n, first + count);
    return std::string(text.substr(b[first], b[last] - b[first]));
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x3400 && cp <= 0x9FFF) || (cp >= 0xF900 && cp <= 0xFAFF) ||
           (cp >= 0x20000 && cp <= 0x2FA1F) || (cp >= 0x3000 && cp <= 0x303F) ||
           (cp >= 0xFF00 && cp <= 0xFFEF);
}

} // namespace nl2gql::utf8
