#include "cochange/analysis/normalize.hpp"

#include <cctype>

#include "cochange/analysis/java_lexer.hpp"

namespace cochange::analysis {

std::string normalized_text(std::string_view source) {
    const LexResult lexed = lex_java(source);
    if (!lexed.ok) {
        // Fall back to whitespace collapsing so an unlexable body still
        // compares deterministically.
        std::string out;
        bool pending_space = false;
        for (char c : source) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                pending_space = !out.empty();
                continue;
            }
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
        return out;
    }
    std::string out;
    for (const Token& t : lexed.tokens) {
        if (!out.empty()) out.push_back(' ');
        out.append(t.text);
    }
    return out;
}

std::vector<std::string> clone_lines(std::string_view source) {
    const LexResult lexed = lex_java(source);
    std::vector<std::string> lines;
    std::string current;
    int paren_depth = 0;
    auto flush = [&] {
        if (!current.empty()) lines.push_back(std::move(current));
        current.clear();
    };
    auto append = [&](std::string_view text) {
        if (!current.empty()) current.push_back(' ');
        current.append(text);
    };
    for (const Token& t : lexed.tokens) {
        switch (t.kind) {
            case TokenKind::Identifier: append("id"); break;
            case TokenKind::Literal: append("lit"); break;
            default:
                if (t.is("(")) ++paren_depth;
                if (t.is(")") && paren_depth > 0) --paren_depth;
                if (t.is("}")) {
                    flush();
                    append(t.text);
                    flush();
                    break;
                }
                append(t.text);
                if (t.is("{") || (t.is(";") && paren_depth == 0)) flush();
                break;
        }
    }
    flush();
    return lines;
}

std::vector<std::string> identifier_subtokens(std::string_view source) {
    const LexResult lexed = lex_java(source);
    std::vector<std::string> out;
    for (const Token& t : lexed.tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        std::string piece;
        auto emit = [&] {
            if (!piece.empty()) out.push_back(std::move(piece));
            piece.clear();
        };
        const std::string_view w = t.text;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const unsigned char c = static_cast<unsigned char>(w[i]);
            if (c == '_' || c == '$' || std::isdigit(c)) {
                emit();
                continue;
            }
            if (std::isupper(c) && !piece.empty()) {
                const bool prev_lower = std::islower(static_cast<unsigned char>(w[i - 1])) != 0;
                const bool next_lower = i + 1 < w.size() && std::islower(static_cast<unsigned char>(w[i + 1]));
                // "parseHTTPResponse" -> parse, http, response
                if (prev_lower || next_lower) emit();
            }
            piece.push_back(static_cast<char>(std::tolower(c)));
        }
        emit();
    }
    return out;
}

}  // namespace cochange::analysis
