#include "cochange/analysis/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace cochange::analysis {

namespace {

constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "non-sealed"};

// Longest first so that greedy matching picks e.g. ">>>=" over ">>".
constexpr std::array<std::string_view, 25> kMultiCharOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>"};

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

}  // namespace

bool is_java_keyword(std::string_view word) noexcept {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

LexResult lex_java(std::string_view src, bool keep_comments) {
    LexResult result;
    std::size_t i = 0;
    int line = 1;
    const std::size_t n = src.size();

    auto fail = [&](std::string message) {
        result.ok = false;
        result.error = std::move(message) + " at line " + std::to_string(line);
    };
    auto push = [&](TokenKind kind, std::size_t start, int start_line) {
        if (kind == TokenKind::Comment && !keep_comments) return;
        result.tokens.push_back(Token{kind, src.substr(start, i - start), start, start_line});
    };

    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        const int start_line = line;

        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            push(TokenKind::Comment, start, start_line);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            const std::size_t close = src.find("*/", i + 2);
            if (close == std::string_view::npos) {
                fail("unterminated block comment");
                return result;
            }
            line += static_cast<int>(std::count(src.begin() + static_cast<std::ptrdiff_t>(i),
                                                src.begin() + static_cast<std::ptrdiff_t>(close), '\n'));
            i = close + 2;
            push(TokenKind::Comment, start, start_line);
            continue;
        }
        if (src.substr(i, 3) == "\"\"\"") {
            std::size_t j = i + 3;
            bool closed = false;
            while (j < n) {
                if (src[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (src.substr(j, 3) == "\"\"\"") {
                    closed = true;
                    j += 3;
                    break;
                }
                ++j;
            }
            if (!closed) {
                fail("unterminated text block");
                return result;
            }
            line += static_cast<int>(std::count(src.begin() + static_cast<std::ptrdiff_t>(i),
                                                src.begin() + static_cast<std::ptrdiff_t>(j), '\n'));
            i = j;
            push(TokenKind::Literal, start, start_line);
            continue;
        }
        if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n && src[j] != '\n') {
                if (src[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (src[j] == static_cast<char>(c)) {
                    closed = true;
                    ++j;
                    break;
                }
                ++j;
            }
            if (!closed) {
                fail("unterminated literal");
                return result;
            }
            i = j;
            push(TokenKind::Literal, start, start_line);
            continue;
        }
        if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            ++i;
            while (i < n) {
                const unsigned char d = static_cast<unsigned char>(src[i]);
                if (std::isalnum(d) || d == '_' || d == '.') {
                    ++i;
                } else if ((d == '+' || d == '-') &&
                           (src[i - 1] == 'e' || src[i - 1] == 'E' || src[i - 1] == 'p' || src[i - 1] == 'P') &&
                           !(src[start] == '0' && start + 1 < n && (src[start + 1] == 'x' || src[start + 1] == 'X') &&
                             (src[i - 1] == 'e' || src[i - 1] == 'E'))) {
                    ++i;
                } else {
                    break;
                }
            }
            push(TokenKind::Literal, start, start_line);
            continue;
        }
        if (is_ident_start(c)) {
            while (i < n && is_ident_part(static_cast<unsigned char>(src[i]))) ++i;
            const std::string_view word = src.substr(start, i - start);
            if (word == "true" || word == "false" || word == "null") {
                push(TokenKind::Literal, start, start_line);
            } else if (word == "non" && src.substr(i, 7) == "-sealed") {
                i += 7;
                push(TokenKind::Keyword, start, start_line);
            } else {
                push(is_java_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, start_line);
            }
            continue;
        }
        bool matched = false;
        for (std::string_view op : kMultiCharOperators) {
            if (src.substr(i, op.size()) == op) {
                i += op.size();
                matched = true;
                break;
            }
        }
        if (!matched) ++i;
        push(TokenKind::Operator, start, start_line);
    }
    return result;
}

}  // namespace cochange::analysis
