#include "cochange/analysis/method_extractor.hpp"

#include <optional>
#include <utility>

#include "cochange/analysis/java_lexer.hpp"
#include "cochange/common/text.hpp"

namespace cochange::analysis {

namespace {

struct TypeScope {
    std::string qualified;
    std::string simple;
    std::string top_level;
    std::string superclass;
    bool is_record = false;
    std::vector<Parameter> record_components;
};

bool has_test_prefix(std::string_view name) {
    return starts_with(name, "test") || starts_with(name, "Test");
}

class JavaFileParser {
public:
    JavaFileParser(std::string_view path, std::string_view source, FileAnalysis& out)
        : path_(path), src_(source), out_(out) {}

    void run() {
        LexResult lexed = lex_java(src_);
        if (!lexed.ok) {
            fail(lexed.error);
            return;
        }
        toks_ = std::move(lexed.tokens);
        if (!match_brackets()) return;

        const TypeScope root;
        std::size_t i = 0;
        const std::size_t n = toks_.size();
        while (i < n) {
            const Token& t = toks_[i];
            if (t.is("@") && !(i + 1 < n && toks_[i + 1].is("interface"))) {
                i = skip_annotation(i);
            } else if (t.is("package")) {
                std::size_t k = i + 1;
                std::string pkg;
                while (k < n && !toks_[k].is(";")) pkg.append(toks_[k++].text);
                out_.package = pkg;
                i = k + 1;
            } else if (t.is("import")) {
                while (i < n && !toks_[i].is(";")) ++i;
                ++i;
            } else if (t.is(";")) {
                ++i;
            } else {
                i = parse_member(i, n, root);
            }
        }
    }

private:
    void fail(const std::string& why) {
        out_.ok = false;
        out_.methods.clear();
        out_.types.clear();
        out_.warnings.push_back(std::string(path_) + ": " + why);
    }

    bool match_brackets() {
        match_.assign(toks_.size(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.kind != TokenKind::Operator) continue;
            if (t.text == "(" || t.text == "[" || t.text == "{") {
                stack.push_back(i);
            } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                const char open = t.text == ")" ? '(' : t.text == "]" ? '[' : '{';
                if (stack.empty() || toks_[stack.back()].text[0] != open) {
                    fail("unbalanced '" + std::string(t.text) + "' at line " + std::to_string(t.line));
                    return false;
                }
                match_[stack.back()] = i;
                match_[i] = stack.back();
                stack.pop_back();
            }
        }
        if (!stack.empty()) {
            fail("unclosed '" + std::string(toks_[stack.back()].text) + "' at line " +
                 std::to_string(toks_[stack.back()].line));
            return false;
        }
        return true;
    }

    [[nodiscard]] bool is_open(std::size_t i) const {
        const Token& t = toks_[i];
        return t.kind == TokenKind::Operator && (t.text == "(" || t.text == "[" || t.text == "{");
    }

    [[nodiscard]] std::size_t skip_annotation(std::size_t i) const {
        std::size_t m = i + 1;
        if (m < toks_.size() && toks_[m].is_word()) ++m;
        while (m + 1 < toks_.size() && toks_[m].is(".") && toks_[m + 1].is_word()) m += 2;
        if (m < toks_.size() && toks_[m].is("(")) m = match_[m] + 1;
        return m;
    }

    [[nodiscard]] bool is_record_header(std::size_t k, std::size_t end) const {
        return toks_[k].kind == TokenKind::Identifier && toks_[k].text == "record" && k + 2 < end &&
               toks_[k + 1].kind == TokenKind::Identifier && (toks_[k + 2].is("(") || toks_[k + 2].is("<")) &&
               (k == 0 || !toks_[k - 1].is("."));
    }

    /// Index of the type-introducing keyword within [begin, end), if any.
    [[nodiscard]] std::optional<std::size_t> find_type_keyword(std::size_t begin, std::size_t end) const {
        for (std::size_t k = begin; k < end; ++k) {
            const Token& t = toks_[k];
            if (t.is("@")) {
                if (k + 1 < end && toks_[k + 1].is("interface")) return k + 1;
                k = skip_annotation(k) - 1;
                continue;
            }
            if (is_open(k)) return std::nullopt;
            if (t.is("=")) return std::nullopt;
            if ((t.is("class") || t.is("interface") || t.is("enum")) && (k == begin || !toks_[k - 1].is("."))) return k;
            if (is_record_header(k, end)) return k;
        }
        return std::nullopt;
    }

    [[nodiscard]] std::string superclass_after(std::size_t begin, std::size_t end) const {
        for (std::size_t k = begin; k < end; ++k) {
            if (!toks_[k].is("extends")) continue;
            std::string last;
            std::size_t m = k + 1;
            while (m < end) {
                if (toks_[m].is("@")) {
                    m = skip_annotation(m);
                    continue;
                }
                if (toks_[m].kind != TokenKind::Identifier) break;
                last = std::string(toks_[m].text);
                if (m + 1 < end && toks_[m + 1].is(".")) {
                    m += 2;
                    continue;
                }
                break;
            }
            return last;
        }
        return {};
    }

    std::size_t declare_type(std::size_t keyword, std::size_t header_end, std::size_t body_open,
                             const TypeScope& outer) {
        const std::size_t name_idx = keyword + 1;
        if (name_idx >= header_end || toks_[name_idx].kind != TokenKind::Identifier) {
            out_.warnings.push_back(std::string(path_) + ": unnamed type declaration at line " +
                                    std::to_string(toks_[keyword].line));
            return match_[body_open] + 1;
        }
        const std::string kind(toks_[keyword].text);
        TypeScope scope;
        scope.simple = std::string(toks_[name_idx].text);
        scope.qualified = outer.qualified.empty() ? scope.simple : outer.qualified + "." + scope.simple;
        scope.top_level = outer.top_level.empty() ? scope.simple : outer.top_level;
        if (kind == "class") scope.superclass = superclass_after(name_idx + 1, header_end);
        if (kind == "record") {
            scope.is_record = true;
            std::size_t p = name_idx + 1;
            while (p < header_end && !toks_[p].is("(")) ++p;
            if (p < header_end) scope.record_components = parse_params(p, match_[p]);
        }
        out_.types.push_back(TypeDeclaration{std::string(path_), out_.package, scope.qualified, scope.simple,
                                             scope.superclass});
        parse_type_body(body_open + 1, match_[body_open], scope, kind == "enum");
        return match_[body_open] + 1;
    }

    void parse_type_body(std::size_t begin, std::size_t end, const TypeScope& scope, bool is_enum) {
        std::size_t i = begin;
        if (is_enum) {
            std::size_t k = begin;
            while (k < end) {
                if (toks_[k].is(";")) {
                    ++k;
                    break;
                }
                if (toks_[k].is("@")) {
                    k = skip_annotation(k);
                } else if (toks_[k].is("{")) {
                    parse_type_body(k + 1, match_[k], scope, false);
                    k = match_[k] + 1;
                } else if (is_open(k)) {
                    k = match_[k] + 1;
                } else {
                    ++k;
                }
            }
            i = k;
        }
        while (i < end) {
            if (toks_[i].is(";")) {
                ++i;
                continue;
            }
            i = parse_member(i, end, scope);
        }
    }

    std::size_t parse_member(std::size_t i, std::size_t end, const TypeScope& scope) {
        std::size_t j = i;
        while (j < end) {
            const Token& t = toks_[j];
            if (t.is("{") || t.is(";") || t.is("}")) break;
            if (is_open(j)) {
                j = match_[j] + 1;
                continue;
            }
            ++j;
        }
        if (j >= end) return end;
        if (!toks_[j].is("{")) return j + 1;

        const std::size_t close = match_[j];
        if (auto kw = find_type_keyword(i, j)) return declare_type(*kw, j, j, scope);

        // Walk the header: skip annotations, look for '=' or the parameter list.
        bool has_assign = false;
        std::optional<std::size_t> paren;
        std::size_t significant = 0;
        std::size_t last_word = j;
        for (std::size_t k = i; k < j; ++k) {
            const Token& t = toks_[k];
            if (t.is("@")) {
                k = skip_annotation(k) - 1;
                continue;
            }
            if (t.is("=")) {
                has_assign = true;
                break;
            }
            if (t.is("(")) {
                if (!paren && k > i && toks_[k - 1].kind == TokenKind::Identifier) paren = k;
                k = match_[k];
                continue;
            }
            if (is_open(k)) {
                k = match_[k];
                continue;
            }
            const bool modifier = t.kind == TokenKind::Keyword &&
                                  (t.text == "public" || t.text == "protected" || t.text == "private" ||
                                   t.text == "static" || t.text == "final" || t.text == "abstract" ||
                                   t.text == "synchronized" || t.text == "native" || t.text == "strictfp");
            if (!modifier) {
                ++significant;
                last_word = k;
            }
        }

        if (has_assign || (paren && has_keyword_after(match_[*paren] + 1, j, "default"))) {
            std::size_t k = j;
            while (k < end && !toks_[k].is(";")) k = is_open(k) ? match_[k] + 1 : k + 1;
            scan_code(i, std::min(k, end), scope);
            return k + 1;
        }
        if (paren && !scope.qualified.empty()) {
            const std::size_t p = *paren;
            add_method(i, p - 1, parse_params(p, match_[p]), j, scope);
            scan_code(j + 1, close, scope);
            return close + 1;
        }
        if (significant == 0) {
            scan_code(j + 1, close, scope);  // initializer block
            return close + 1;
        }
        if (scope.is_record && significant == 1 && toks_[last_word].text == scope.simple) {
            add_method(i, last_word, scope.record_components, j, scope);
            scan_code(j + 1, close, scope);
            return close + 1;
        }
        out_.warnings.push_back(std::string(path_) + ": skipped unrecognized block at line " +
                                std::to_string(toks_[i].line));
        return close + 1;
    }

    [[nodiscard]] bool has_keyword_after(std::size_t begin, std::size_t end, std::string_view kw) const {
        for (std::size_t k = begin; k < end; ++k)
            if (toks_[k].is(kw)) return true;
        return false;
    }

    void add_method(std::size_t header_start, std::size_t name_idx, std::vector<Parameter> params,
                    std::size_t body_open, const TypeScope& scope) {
        const std::size_t close = match_[body_open];
        MethodRecord m;
        m.file_path = std::string(path_);
        m.package = out_.package;
        m.type_name = scope.qualified;
        m.name = std::string(toks_[name_idx].text);
        m.params = std::move(params);
        if (!scope.superclass.empty()) m.superclasses.push_back(scope.superclass);
        const std::size_t begin_offset = toks_[header_start].offset;
        m.body_source = std::string(src_.substr(begin_offset, toks_[close].offset + 1 - begin_offset));
        m.line_span = LineSpan{toks_[header_start].line, toks_[close].line};
        m.is_test = is_test_path(path_) || has_test_prefix(m.name) || has_test_prefix(scope.simple) ||
                    has_test_prefix(scope.top_level);
        m.method_id = identity_of(m);
        out_.methods.push_back(std::move(m));
    }

    /// Finds anonymous and local class bodies inside executable code.
    void scan_code(std::size_t begin, std::size_t end, const TypeScope& scope) {
        std::size_t k = begin;
        while (k < end) {
            const Token& t = toks_[k];
            if (t.is("new")) {
                std::size_t m = k + 1;
                int angle = 0;
                while (m < end) {
                    const Token& u = toks_[m];
                    if (u.is("@")) {
                        m = skip_annotation(m);
                        continue;
                    }
                    if (u.is("<")) ++angle;
                    else if (u.is(">")) --angle;
                    else if (u.is(">>")) angle -= 2;
                    else if (u.is(">>>")) angle -= 3;
                    else if (angle <= 0 && (u.is("(") || u.is("[") || u.is("{"))) break;
                    else if (angle <= 0 && !u.is_word() && !u.is(".") && !u.is("?") && !u.is(",")) break;
                    ++m;
                }
                if (m < end && toks_[m].is("(")) {
                    const std::size_t args_close = match_[m];
                    if (args_close + 1 < end && toks_[args_close + 1].is("{")) {
                        const std::size_t body = args_close + 1;
                        scan_code(m + 1, args_close, scope);
                        parse_type_body(body + 1, match_[body], scope, false);
                        k = match_[body] + 1;
                        continue;
                    }
                }
                k = m;
                continue;
            }
            const bool type_kw = (t.is("class") || t.is("interface") || t.is("enum")) &&
                                 (k == 0 || !toks_[k - 1].is("."));
            if ((type_kw || is_record_header(k, end)) && k + 1 < end &&
                toks_[k + 1].kind == TokenKind::Identifier) {
                std::size_t q = k + 1;
                while (q < end && !toks_[q].is("{") && !toks_[q].is(";")) q = toks_[q].is("(") ? match_[q] + 1 : q + 1;
                if (q < end && toks_[q].is("{")) {
                    k = declare_type(k, q, q, scope);
                    continue;
                }
            }
            ++k;
        }
    }

    [[nodiscard]] std::string join_tokens(std::size_t begin, std::size_t end) const {
        std::string out;
        bool prev_word = false;
        for (std::size_t k = begin; k < end; ++k) {
            const Token& t = toks_[k];
            if (t.is("@")) {
                k = skip_annotation(k) - 1;
                continue;
            }
            const bool word = t.is_word();
            if (word && prev_word) out.push_back(' ');
            out.append(t.text);
            prev_word = word || t.is("?");
        }
        return out;
    }

    [[nodiscard]] std::vector<Parameter> parse_params(std::size_t open, std::size_t close) const {
        std::vector<Parameter> params;
        std::size_t start = open + 1;
        int angle = 0;
        auto finish = [&](std::size_t a, std::size_t b) {
            while (a < b && (toks_[a].is("@") || toks_[a].is("final"))) {
                a = toks_[a].is("@") ? skip_annotation(a) : a + 1;
            }
            if (a >= b) return;
            std::size_t name_end = b;
            int trailing_dims = 0;
            while (name_end >= a + 2 && toks_[name_end - 1].is("]") && toks_[name_end - 2].is("[")) {
                name_end -= 2;
                ++trailing_dims;
            }
            if (name_end <= a) return;
            const std::size_t name_idx = name_end - 1;
            if (!toks_[name_idx].is_word() || toks_[name_idx].text == "this") return;
            std::string type = join_tokens(a, name_idx);
            for (int d = 0; d < trailing_dims; ++d) type += "[]";
            params.push_back(Parameter{std::move(type), std::string(toks_[name_idx].text)});
        };
        for (std::size_t k = open + 1; k < close; ++k) {
            const Token& t = toks_[k];
            if (is_open(k)) {
                k = match_[k];
                continue;
            }
            if (t.is("<")) ++angle;
            else if (t.is(">")) --angle;
            else if (t.is(">>")) angle -= 2;
            else if (t.is(">>>")) angle -= 3;
            else if (t.is(",") && angle <= 0) {
                finish(start, k);
                start = k + 1;
            }
        }
        finish(start, close);
        return params;
    }

    std::string_view path_;
    std::string_view src_;
    FileAnalysis& out_;
    std::vector<Token> toks_;
    std::vector<std::size_t> match_;
};

}  // namespace

bool is_test_path(std::string_view file_path) noexcept {
    std::size_t start = 0;
    while (start <= file_path.size()) {
        const std::size_t pos = file_path.find('/', start);
        const std::size_t end = pos == std::string_view::npos ? file_path.size() : pos;
        // The last segment is the file name, not a directory.
        if (pos == std::string_view::npos) break;
        if (file_path.substr(start, end - start) == "test") return true;
        start = pos + 1;
    }
    return false;
}

FileAnalysis analyze_java_file(std::string_view file_path, std::string_view source) {
    FileAnalysis out;
    JavaFileParser(file_path, source, out).run();
    return out;
}

std::vector<MethodRecord> extract_methods(std::string_view file_path, std::string_view source,
                                          std::vector<std::string>* warnings) {
    FileAnalysis analysis = analyze_java_file(file_path, source);
    if (warnings) {
        for (auto& w : analysis.warnings) warnings->push_back(std::move(w));
    }
    return std::move(analysis.methods);
}

}  // namespace cochange::analysis
