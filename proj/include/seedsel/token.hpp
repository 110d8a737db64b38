#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace seedsel {

struct Token {
    std::string text;
    std::size_t line = 1; // 1-based
    std::size_t col = 1;  // 1-based, in bytes
};

namespace detail {

inline bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Multi-character operators, longest first so maximal munch falls out of
// scanning the table in order.
inline const std::array<std::string_view, 24>& operator_table() {
    static const std::array<std::string_view, 24> ops = {
        ">>>=",
        ">>>", "<<=", ">>=",
        "==", "!=", "<=", ">=", "&&", "||", "++", "--",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
        "<<", ">>", "->", "::",
    };
    return ops;
}

} // namespace detail

// Splits source text into lexical tokens: identifiers and keywords as one
// class, numeric literals (integer, decimal with optional exponent, hex),
// string and character literals kept verbatim, operators against a fixed
// multi-character table with maximal munch, and any other non-space byte as
// a single-character token. Comments (line and block) and whitespace are
// discarded. Never fails: unterminated literals and comments run to the end
// of input.
inline std::vector<Token> scan(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto advance = [&](std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto emit = [&](std::size_t start, std::size_t start_line, std::size_t start_col) {
        out.push_back(Token{std::string(src.substr(start, i - start)), start_line, start_col});
    };

    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            advance(2);
            while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) advance(1);
            if (i < n) advance(2);
            continue;
        }

        const std::size_t start = i;
        const std::size_t start_line = line;
        const std::size_t start_col = col;

        if (detail::is_ident_start(c)) {
            while (i < n && detail::is_ident_char(src[i])) advance(1);
            emit(start, start_line, start_col);
            continue;
        }
        if (detail::is_digit(c)) {
            if (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
                advance(2);
                while (i < n && detail::is_hex_digit(src[i])) advance(1);
            } else {
                while (i < n && detail::is_digit(src[i])) advance(1);
                if (i + 1 < n && src[i] == '.' && detail::is_digit(src[i + 1])) {
                    advance(1);
                    while (i < n && detail::is_digit(src[i])) advance(1);
                }
                if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                    std::size_t j = i + 1;
                    if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                    if (j < n && detail::is_digit(src[j])) {
                        advance(j - i);
                        while (i < n && detail::is_digit(src[i])) advance(1);
                    }
                }
            }
            // Trailing type suffixes (1L, 0x1fL, 2.5f) stay in the literal.
            while (i < n && detail::is_ident_char(src[i])) advance(1);
            emit(start, start_line, start_col);
            continue;
        }
        if (c == '"' || c == '\'') {
            advance(1);
            while (i < n && src[i] != c) {
                if (src[i] == '\\' && i + 1 < n) advance(2);
                else advance(1);
            }
            if (i < n) advance(1);
            emit(start, start_line, start_col);
            continue;
        }

        bool matched = false;
        for (const auto op : detail::operator_table()) {
            if (src.substr(i, op.size()) == op) {
                advance(op.size());
                emit(start, start_line, start_col);
                matched = true;
                break;
            }
        }
        if (matched) continue;

        advance(1);
        emit(start, start_line, start_col);
    }
    return out;
}

inline std::vector<std::string> tokenize(std::string_view src) {
    std::vector<std::string> out;
    for (auto& t : scan(src)) out.push_back(std::move(t.text));
    return out;
}

} // namespace seedsel
