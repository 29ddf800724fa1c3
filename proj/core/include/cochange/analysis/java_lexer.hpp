#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cochange::analysis {

enum class TokenKind { Identifier, Keyword, Literal, Operator, Comment };

/// A token is a view into the lexed source, which must outlive it.
struct Token {
    TokenKind kind;
    std::string_view text;
    std::size_t offset = 0;
    int line = 1;

    [[nodiscard]] bool is(std::string_view s) const noexcept {
        return (kind == TokenKind::Operator || kind == TokenKind::Keyword) && text == s;
    }
    [[nodiscard]] bool is_word() const noexcept {
        return kind == TokenKind::Identifier || kind == TokenKind::Keyword;
    }
};

struct LexResult {
    std::vector<Token> tokens;
    bool ok = true;
    std::string error;
};

/// Tokenizes Java source. Comments are dropped unless `keep_comments`.
/// Unterminated comments and string literals set ok = false.
LexResult lex_java(std::string_view source, bool keep_comments = false);

bool is_java_keyword(std::string_view word) noexcept;

}  // namespace cochange::analysis
