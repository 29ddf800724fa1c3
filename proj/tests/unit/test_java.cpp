#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "cochange/analysis/call_graph.hpp"
#include "cochange/analysis/clone.hpp"
#include "cochange/analysis/embedding.hpp"
#include "cochange/analysis/java_lexer.hpp"
#include "cochange/analysis/method_extractor.hpp"
#include "cochange/analysis/methods_io.hpp"
#include "cochange/analysis/normalize.hpp"
#include "cochange/analysis/snapshot.hpp"
#include "cochange/common/rng.hpp"
#include "support.hpp"

using namespace cochange;
using namespace cochange::analysis;

namespace {

const MethodRecord* by_name(const std::vector<MethodRecord>& methods, const std::string& name) {
    for (const auto& m : methods) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

// Textbook O(nm) table, independent of the library's implementation.
std::size_t lcs_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
        }
    }
    return t[a.size()][b.size()];
}

const char* kShapes = R"(package com.example.shapes;

import java.util.List;

/** Shapes. */
public class Circle extends Shape implements Comparable<Circle> {
    private final double r;

    public Circle(double r) {
        this.r = r;
    }

    @Override
    public double area() {
        return Math.PI * r * r; // "}" inside a comment
    }

    public static <T extends Comparable<T>> T max(List<? extends T> items, java.util.Map<String, List<T>> index) {
        String brace = "{";
        char c = '}';
        return items.get(0);
    }

    void varargs(final int... values) {}

    int[] matrix(int rows[], @Deprecated String s) { return new int[rows.length]; }

    abstract static class Inner {
        abstract void skipped();
        void kept() { Runnable r = new Runnable() { public void run() { area(); } }; }
    }

    interface Api {
        void noBody();
        default int withBody() { return 1; }
    }

    public int compareTo(Circle o) { return Double.compare(r, o.r); }
}
)";

}  // namespace

TEST(Lexer, SkipsCommentsAndKeepsLiteralsIntact) {
    const auto r = lex_java("int x = 1; // c\n/* b */ String s = \"a // b\"; char q = '\\'';");
    ASSERT_TRUE(r.ok);
    std::vector<std::string> texts;
    for (const auto& t : r.tokens) texts.emplace_back(t.text);
    EXPECT_EQ(std::count(texts.begin(), texts.end(), "\"a // b\""), 1);
    EXPECT_EQ(std::count(texts.begin(), texts.end(), "'\\''"), 1);
    for (const auto& t : r.tokens) EXPECT_NE(t.kind, TokenKind::Comment);
    EXPECT_EQ(r.tokens.back().line, 2);
}

TEST(Lexer, KeepsCommentsOnRequest) {
    const auto r = lex_java("a /* x */ b", true);
    ASSERT_EQ(r.tokens.size(), 3U);
    EXPECT_EQ(r.tokens[1].kind, TokenKind::Comment);
}

TEST(Lexer, ReportsUnterminatedInput) {
    EXPECT_FALSE(lex_java("/* open").ok);
    EXPECT_FALSE(lex_java("String s = \"open;").ok);
}

TEST(Lexer, TextBlocksAndMultiCharOperators) {
    const auto r = lex_java("s = \"\"\"\n  hi \" there\n  \"\"\"; a >>>= 2; b -> c; x::y;");
    ASSERT_TRUE(r.ok);
    std::vector<std::string> ops;
    for (const auto& t : r.tokens) {
        if (t.kind == TokenKind::Operator) ops.emplace_back(t.text);
    }
    EXPECT_NE(std::find(ops.begin(), ops.end(), ">>>="), ops.end());
    EXPECT_NE(std::find(ops.begin(), ops.end(), "->"), ops.end());
    EXPECT_NE(std::find(ops.begin(), ops.end(), "::"), ops.end());
}

TEST(Extractor, FindsMethodsConstructorsAndNestedTypes) {
    const auto fa = analyze_java_file("src/main/java/com/example/shapes/Circle.java", kShapes);
    ASSERT_TRUE(fa.ok);
    EXPECT_EQ(fa.package, "com.example.shapes");
    std::vector<std::string> names;
    for (const auto& m : fa.methods) names.push_back(m.type_name + "." + m.name);
    std::sort(names.begin(), names.end());
    EXPECT_EQ(names, (std::vector<std::string>{"Circle.Api.withBody", "Circle.Circle", "Circle.Inner.kept",
                                               "Circle.Inner.run", "Circle.area", "Circle.compareTo",
                                               "Circle.matrix", "Circle.max", "Circle.varargs"}));
}

TEST(Extractor, ParsesParameters) {
    const auto methods = extract_methods("Circle.java", kShapes);
    const auto* max = by_name(methods, "max");
    ASSERT_NE(max, nullptr);
    EXPECT_EQ(max->param_types(), (std::vector<std::string>{"List<? extends T>", "java.util.Map<String,List<T>>"}));
    EXPECT_EQ(max->param_names(), (std::vector<std::string>{"items", "index"}));
    const auto* varargs = by_name(methods, "varargs");
    ASSERT_NE(varargs, nullptr);
    EXPECT_EQ(varargs->param_types(), (std::vector<std::string>{"int..."}));
    const auto* matrix = by_name(methods, "matrix");
    ASSERT_NE(matrix, nullptr);
    EXPECT_EQ(matrix->param_types(), (std::vector<std::string>{"int[]", "String"}));
}

TEST(Extractor, SpansBodiesAndSuperclass) {
    const auto methods = extract_methods("Circle.java", kShapes);
    const auto* area = by_name(methods, "area");
    ASSERT_NE(area, nullptr);
    EXPECT_EQ(area->line_span.start, 13);  // the annotation line
    EXPECT_EQ(area->line_span.end, 16);
    EXPECT_TRUE(area->body_source.rfind("@Override", 0) == 0);
    EXPECT_EQ(area->body_source.back(), '}');
    EXPECT_EQ(area->superclasses, (std::vector<std::string>{"Shape"}));
    EXPECT_EQ(area->method_id, identity_of(*area));
}

TEST(Extractor, BrokenFileYieldsWarningNotMethods) {
    std::vector<std::string> warnings;
    const auto methods = extract_methods("Bad.java", "class Bad { void f() { if (x) { }", &warnings);
    EXPECT_TRUE(methods.empty());
    EXPECT_FALSE(warnings.empty());
}

TEST(Extractor, EnumsAndRecords) {
    const char* src = R"(enum Color { RED { void paint() {} }, GREEN; int code() { return 1; } }
record Point(int x, int y) { Point { if (x < 0) throw new IllegalArgumentException(); } int sum() { return x + y; } })";
    const auto methods = extract_methods("Color.java", src);
    std::vector<std::string> names;
    for (const auto& m : methods) names.push_back(m.type_name + "." + m.name);
    std::sort(names.begin(), names.end());
    EXPECT_NE(std::find(names.begin(), names.end(), "Color.code"), names.end());
    EXPECT_NE(std::find(names.begin(), names.end(), "Point.sum"), names.end());
    EXPECT_NE(std::find(names.begin(), names.end(), "Point.Point"), names.end());
}

TEST(Extractor, TestDetection) {
    EXPECT_TRUE(is_test_path("src/test/java/a/B.java"));
    EXPECT_FALSE(is_test_path("src/main/java/a/B.java"));
    EXPECT_FALSE(is_test_path("test"));  // a file, not a directory
    auto methods = extract_methods("src/main/java/a/TestFoo.java", "class TestFoo { void check() {} }");
    ASSERT_EQ(methods.size(), 1U);
    EXPECT_TRUE(methods[0].is_test);
    methods = extract_methods("src/main/java/a/Foo.java", "class Foo { void testing() {} void check() {} }");
    ASSERT_EQ(methods.size(), 2U);
    EXPECT_NE(methods[0].is_test, methods[1].is_test);
    // A "Test" suffix alone does not mark test code.
    methods = extract_methods("src/main/java/a/FooTest.java", "class FooTest { void check() {} }");
    ASSERT_EQ(methods.size(), 1U);
    EXPECT_FALSE(methods[0].is_test);
}

TEST(Snapshot, ResolvesTransitiveSuperclassesWithoutObject) {
    const std::vector<SourceFile> files{
        {"a/A.java", "class A extends Object { void a() {} }"},
        {"a/B.java", "class B extends A { void b() {} }"},
        {"a/C.java", "class C extends B { void c() {} }"},
    };
    const auto snap = build_snapshot("rev", files);
    ASSERT_EQ(snap.methods.size(), 3U);
    for (const auto& m : snap.methods) {
        if (m.name == "a") {
            EXPECT_TRUE(m.superclasses.empty());
        } else if (m.name == "b") {
            EXPECT_EQ(m.superclasses, (std::vector<std::string>{"A"}));
        } else if (m.name == "c") {
            EXPECT_EQ(m.superclasses, (std::vector<std::string>{"B", "A"}));
        }
    }
    EXPECT_TRUE(std::is_sorted(snap.methods.begin(), snap.methods.end(),
                               [](const auto& x, const auto& y) { return x.method_id < y.method_id; }));
}

TEST(Snapshot, DuplicateIdsKeepFirstWithWarning) {
    const std::vector<SourceFile> files{{"a/A.java", "class A { void f() {} void f() { int x; } }"}};
    const auto snap = build_snapshot("rev", files);
    EXPECT_EQ(snap.methods.size(), 1U);
    EXPECT_FALSE(snap.warnings.empty());
}

TEST(Normalize, IgnoresCommentsAndWhitespace) {
    EXPECT_EQ(normalized_text("int f() {\n  // c\n  return 1;\n}"), normalized_text("int f(){ return   1; /* x */ }"));
    EXPECT_NE(normalized_text("int f() { return 1; }"), normalized_text("int f() { return 2; }"));
}

TEST(Normalize, SubtokensSplitCamelCase) {
    const auto t = identifier_subtokens("parseHTTPResponse max_value x");
    EXPECT_NE(std::find(t.begin(), t.end(), "parse"), t.end());
    EXPECT_NE(std::find(t.begin(), t.end(), "response"), t.end());
    EXPECT_NE(std::find(t.begin(), t.end(), "max"), t.end());
    EXPECT_NE(std::find(t.begin(), t.end(), "value"), t.end());
}

TEST(Clone, LcsMatchesOracleOnRandomSequences) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> a(rng.uniform_index(12)), b(rng.uniform_index(12));
        for (auto& s : a) s = std::string(1, static_cast<char>('a' + rng.uniform_index(4)));
        for (auto& s : b) s = std::string(1, static_cast<char>('a' + rng.uniform_index(4)));
        ASSERT_EQ(lcs_length(a, b), lcs_oracle(a, b));
    }
}

TEST(Clone, ScoreIsLcsOverLongerWithReportThreshold) {
    const std::vector<std::string> a{"x", "y", "z", "w", "v", "u", "t", "s", "r", "q"};
    auto b = a;
    b[9] = "different";
    EXPECT_DOUBLE_EQ(clone_similarity_of_lines(a, b), 90.0);
    b[8] = "other";
    b[7] = "more";
    b[6] = "again";
    EXPECT_DOUBLE_EQ(clone_similarity_of_lines(a, b), 0.0);  // 60 is below the report threshold
    EXPECT_DOUBLE_EQ(clone_similarity_of_lines(a, a), 100.0);
    EXPECT_DOUBLE_EQ(clone_similarity_of_lines({}, {}), 0.0);
}

TEST(Clone, RenamedIdentifiersStillMatch) {
    const auto a = tests::make_method("A.java", "A", "f", {}, "int f(int a) {\n  int s = a + 1;\n  return s * 2;\n}");
    const auto b = tests::make_method("B.java", "B", "g", {}, "int g(int q) {\n  int t = q + 7;\n  return t * 3;\n}");
    EXPECT_DOUBLE_EQ(clone_similarity(a, b), 100.0);
    const std::vector<MethodRecord> both{a, b};
    const CloneIndex index(both);
    EXPECT_DOUBLE_EQ(index.similarity(a.method_id, b.method_id), 100.0);
}

TEST(Clone, IndexAgreesWithDirectComputation) {
    std::vector<MethodRecord> ms;
    Rng rng(2);
    const std::vector<std::string> stmts{"x = x + 1;", "return x;", "if (x > 0) { y(); }", "call(a, b);", "int z = 3;"};
    for (int i = 0; i < 12; ++i) {
        std::string body = "void m" + std::to_string(i) + "() {\n";
        const auto n = 3 + rng.uniform_index(6);
        for (std::size_t s = 0; s < n; ++s) body += "  " + stmts[rng.uniform_index(stmts.size())] + "\n";
        body += "}";
        ms.push_back(tests::make_method("F.java", "F", "m" + std::to_string(i), {}, body));
    }
    const CloneIndex index(ms);
    for (const auto& a : ms) {
        for (const auto& b : ms) {
            ASSERT_DOUBLE_EQ(index.similarity(a.method_id, b.method_id), clone_similarity(a, b));
            ASSERT_DOUBLE_EQ(clone_similarity(a, b), clone_similarity(b, a));
        }
    }
}

TEST(CallGraph, ResolvesByNameAndArity) {
    const std::vector<SourceFile> files{{"a/A.java", R"(class A {
  void caller() { helper(1); helper(1, 2); other(); caller(); log("x", 1, 2); }
  void helper(int a) {}
  void helper(int a, int b) {}
  void log(String f, Object... args) {}
  void unrelated() {}
})"}};
    const auto snap = build_snapshot("", files);
    const auto edges = build_call_graph(snap.methods);
    const CallGraph graph(edges);
    auto id = [&](const std::string& name, std::size_t arity) {
        for (const auto& m : snap.methods) {
            if (m.name == name && m.params.size() == arity) return m.method_id;
        }
        return MethodId{};
    };
    EXPECT_EQ(graph.calls_between(id("caller", 0), id("helper", 1)), 1);
    EXPECT_EQ(graph.calls_between(id("helper", 2), id("caller", 0)), 1);
    EXPECT_TRUE(graph.linked(id("caller", 0), id("log", 2)));
    EXPECT_FALSE(graph.linked(id("caller", 0), id("unrelated", 0)));
    EXPECT_EQ(graph.calls_between(id("caller", 0), id("caller", 0)), 0);
}

TEST(Embedding, CosineProperties) {
    EmbeddingVector u{MethodId("a"), {1, 0, 0}, EmbeddingProviderKind::ExternalFile};
    EmbeddingVector v{MethodId("b"), {0, 2, 0}, EmbeddingProviderKind::ExternalFile};
    EmbeddingVector w{MethodId("c"), {3, 0, 0}, EmbeddingProviderKind::ExternalFile};
    EmbeddingVector zero{MethodId("z"), {0, 0, 0}, EmbeddingProviderKind::ExternalFile};
    EXPECT_DOUBLE_EQ(cosine_similarity(u, v), 0.0);
    EXPECT_DOUBLE_EQ(cosine_similarity(u, w), 1.0);
    EXPECT_DOUBLE_EQ(cosine_similarity(u, zero), 0.0);
    EmbeddingVector other{MethodId("d"), {1, 0, 0}, EmbeddingProviderKind::TokenHashFallback};
    EXPECT_THROW((void)cosine_similarity(u, other), DataError);
    EmbeddingVector shorter{MethodId("e"), {1, 0}, EmbeddingProviderKind::ExternalFile};
    EXPECT_THROW((void)cosine_similarity(u, shorter), DataError);
}

TEST(Embedding, TokenHashIsDeterministicAndNormalized) {
    const auto a = tests::make_method("A.java", "A", "parseOrder", {}, "void parseOrder() { order.parse(); }");
    const auto b = tests::make_method("B.java", "B", "parseOrder", {}, "void parseOrder() { order.parse(); }");
    const auto c = tests::make_method("C.java", "C", "renderInvoice", {}, "void renderInvoice() { draw(); }");
    const std::vector<MethodRecord> corpus{a, b, c};
    const TokenHashEmbedder e(corpus);
    const auto va = e.embed(a);
    EXPECT_EQ(va.values.size(), TokenHashEmbedder::kDefaultDimension);
    double norm = 0;
    for (double x : va.values) norm += x * x;
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_EQ(va.values, TokenHashEmbedder(corpus).embed(a).values);
    EXPECT_NEAR(cosine_similarity(va, e.embed(b)), 1.0, 1e-12);
    EXPECT_LT(cosine_similarity(va, e.embed(c)), 0.5);
}

TEST(Embedding, ExternalFileRoundTrip) {
    const std::vector<EmbeddingVector> vs{{MethodId("m1"), {0.5, -1.25, 3}, EmbeddingProviderKind::ExternalFile},
                                          {MethodId("m2"), {1e-300, 0, 7}, EmbeddingProviderKind::ExternalFile}};
    std::stringstream ss;
    write_embeddings_jsonl(ss, vs);
    const auto loaded = ExternalEmbeddings::parse(ss);
    EXPECT_EQ(loaded.size(), 2U);
    EXPECT_EQ(loaded.dimension(), 3U);
    auto m = tests::make_method("A.java", "A", "f");
    m.method_id = MethodId("m2");
    EXPECT_EQ(loaded.embed(m).values, vs[1].values);
    m.method_id = MethodId("missing");
    EXPECT_THROW((void)loaded.embed(m), EmbeddingNotFound);
}

TEST(Embedding, ExternalFileRejectsBadInput) {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return ExternalEmbeddings::parse(in);
    };
    EXPECT_THROW(parse("{\"method_id\":\"a\",\"values\":[1,2]}\n{\"method_id\":\"b\",\"values\":[1]}\n"),
                 SchemaError);
    EXPECT_THROW(parse("{\"method_id\":\"a\",\"values\":[1]}\n{\"method_id\":\"a\",\"values\":[2]}\n"), SchemaError);
    EXPECT_THROW(parse("not json\n"), SchemaError);
    EXPECT_THROW(parse("{\"values\":[1]}\n"), SchemaError);
}

TEST(MethodsIo, RoundTrip) {
    const auto snap = build_snapshot("r", std::vector<SourceFile>{{"src/main/java/com/example/shapes/Circle.java", kShapes}});
    std::stringstream ss;
    write_methods_jsonl(ss, snap.methods);
    const auto back = read_methods_jsonl(ss);
    EXPECT_EQ(back, snap.methods);
}

TEST(MethodsIo, RejectsMissingFields) {
    std::istringstream in("{\"method_id\":\"x\"}\n");
    EXPECT_THROW(read_methods_jsonl(in), SchemaError);
}
