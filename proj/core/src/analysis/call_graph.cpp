#include "cochange/analysis/call_graph.hpp"

#include <cctype>
#include <string>
#include <unordered_map>

#include "cochange/analysis/java_lexer.hpp"
#include "cochange/common/text.hpp"

namespace cochange::analysis {

namespace {

struct Target {
    std::size_t fixed_arity;
    bool varargs;
    const MethodId* id;
};

bool is_primitive(std::string_view w) {
    return w == "void" || w == "int" || w == "long" || w == "short" || w == "byte" || w == "char" ||
           w == "boolean" || w == "float" || w == "double";
}

/// Number of arguments between tokens[open] == "(" and its partner.
std::pair<std::size_t, std::size_t> count_arguments(const std::vector<Token>& toks, std::size_t open) {
    int depth = 0;
    int angle = 0;
    std::size_t commas = 0;
    bool any = false;
    std::size_t k = open;
    for (; k < toks.size(); ++k) {
        const Token& t = toks[k];
        if (t.is("(") || t.is("[") || t.is("{")) {
            ++depth;
        } else if (t.is(")") || t.is("]") || t.is("}")) {
            if (--depth == 0) break;
        } else if (depth == 1) {
            if (t.is("<") && k > 0 && toks[k - 1].kind == TokenKind::Identifier && !toks[k - 1].text.empty() &&
                std::isupper(static_cast<unsigned char>(toks[k - 1].text[0]))) {
                ++angle;
            } else if (angle > 0 && t.is(">")) {
                --angle;
            } else if (angle > 0 && t.is(">>")) {
                angle = std::max(0, angle - 2);
            } else if (t.is(",") && angle == 0) {
                ++commas;
            }
        }
        if (k > open && depth >= 1) any = true;
    }
    return {any ? commas + 1 : 0, k};
}

}  // namespace

std::vector<CallEdge> build_call_graph(std::span<const MethodRecord> methods) {
    std::unordered_map<std::string, std::vector<Target>> by_name;
    for (const auto& m : methods) {
        const bool varargs = !m.params.empty() && ends_with(m.params.back().type, "...");
        by_name[m.name].push_back(Target{varargs ? m.params.size() - 1 : m.params.size(), varargs, &m.method_id});
    }

    std::map<std::pair<MethodId, MethodId>, int> counts;
    for (const auto& caller : methods) {
        const LexResult lexed = lex_java(caller.body_source);
        if (!lexed.ok) continue;
        const auto& toks = lexed.tokens;
        // Skip the declaration header: calls start after the first '{' outside parentheses.
        std::size_t start = 0;
        for (int depth = 0; start < toks.size(); ++start) {
            if (toks[start].is("(")) ++depth;
            else if (toks[start].is(")")) --depth;
            else if (depth == 0 && toks[start].is("{")) break;
        }
        for (std::size_t k = start + 1; k + 1 < toks.size(); ++k) {
            const Token& t = toks[k];
            if (t.kind != TokenKind::Identifier || !toks[k + 1].is("(")) continue;
            const Token& prev = toks[k - 1];
            if (prev.kind == TokenKind::Identifier || prev.is(">") || prev.is("]") ||
                (prev.kind == TokenKind::Keyword && is_primitive(prev.text))) {
                continue;  // a declaration, not a call
            }
            auto it = by_name.find(std::string(t.text));
            if (it == by_name.end()) continue;
            const std::size_t arity = count_arguments(toks, k + 1).first;
            for (const Target& target : it->second) {
                const bool accepts = target.varargs ? arity >= target.fixed_arity : arity == target.fixed_arity;
                if (!accepts || *target.id == caller.method_id) continue;
                ++counts[{caller.method_id, *target.id}];
            }
        }
    }

    std::vector<CallEdge> edges;
    edges.reserve(counts.size());
    for (const auto& [key, count] : counts) edges.push_back(CallEdge{key.first, key.second, count});
    return edges;
}

CallGraph::CallGraph(std::span<const CallEdge> edges) {
    for (const auto& e : edges) counts_[{e.caller, e.callee}] += e.count;
}

int CallGraph::calls_between(const MethodId& a, const MethodId& b) const {
    int total = 0;
    if (auto it = counts_.find({a, b}); it != counts_.end()) total += it->second;
    if (a != b) {
        if (auto it = counts_.find({b, a}); it != counts_.end()) total += it->second;
    }
    return total;
}

}  // namespace cochange::analysis
