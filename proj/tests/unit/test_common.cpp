#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <stdexcept>

#include "cochange/common/error.hpp"
#include "cochange/common/hash.hpp"
#include "cochange/common/method_id.hpp"
#include "cochange/common/parallel.hpp"
#include "cochange/common/rng.hpp"
#include "cochange/common/text.hpp"
#include "cochange/common/time.hpp"

using namespace cochange;

TEST(Time, Iso8601RoundTrip) {
    const Instant t = parse_iso8601("2022-07-06T12:34:56Z");
    EXPECT_EQ(to_iso8601(t), "2022-07-06T12:34:56Z");
    EXPECT_EQ(to_unix_seconds(t), 1657110896);
    EXPECT_EQ(parse_iso8601("2022-07-06T12:34:56+00:00"), t);
}

TEST(Time, RejectsMalformed) {
    EXPECT_THROW(parse_iso8601("2022-07-06"), SchemaError);
    EXPECT_THROW(parse_iso8601("2022-13-06T00:00:00Z"), SchemaError);
    EXPECT_THROW(parse_iso8601("yesterday"), SchemaError);
}

TEST(Time, RangeIsHalfOpen) {
    const TimeRange r{from_unix_seconds(10), from_unix_seconds(20)};
    EXPECT_TRUE(r.contains(from_unix_seconds(10)));
    EXPECT_TRUE(r.contains(from_unix_seconds(19)));
    EXPECT_FALSE(r.contains(from_unix_seconds(20)));
    EXPECT_FALSE(r.empty());
    EXPECT_TRUE((TimeRange{from_unix_seconds(5), from_unix_seconds(5)}).empty());
}

TEST(Hash, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, Fnv1aKnownVector) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(to_hex(0xabcULL), "0000000000000abc");
}

TEST(MethodIdentity, DependsOnEveryIdentityField) {
    const auto base = make_method_id("a/B.java", "B", "f", {"int"});
    EXPECT_EQ(base, make_method_id("a/B.java", "B", "f", {"int"}));
    EXPECT_NE(base, make_method_id("a/C.java", "B", "f", {"int"}));
    EXPECT_NE(base, make_method_id("a/B.java", "C", "f", {"int"}));
    EXPECT_NE(base, make_method_id("a/B.java", "B", "g", {"int"}));
    EXPECT_NE(base, make_method_id("a/B.java", "B", "f", {"long"}));
    EXPECT_NE(base, make_method_id("a/B.java", "B", "f", {}));
    // Field boundaries matter.
    EXPECT_NE(make_method_id("ab", "c", "f", {}), make_method_id("a", "bc", "f", {}));
}

TEST(Rng, SameSeedSameStream) {
    Rng a(99), b(99), c(100);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs |= x != c.next();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, UniformIndexStaysInBoundsAndCoversRange) {
    Rng rng(3);
    std::set<std::size_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.uniform_index(7);
        ASSERT_LT(v, 7U);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7U);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, ShuffleIsAPermutation) {
    Rng rng(5);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    rng.shuffle(std::span<int>(v));
    std::multiset<int> s(v.begin(), v.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(s.count(i), 1U);
}

TEST(Parallel, EverySlotVisitedOnce) {
    for (unsigned jobs : {1U, 2U, 4U, 16U}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
        for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}

TEST(Parallel, RethrowsTaskFailure) {
    EXPECT_THROW(parallel_for(100, 4,
                              [](std::size_t i) {
                                  if (i == 37) throw DataError("boom");
                              }),
                 DataError);
}

TEST(Text, Helpers) {
    EXPECT_EQ(split_nonempty("/a//b/", '/'), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(to_lower("MiXeD"), "mixed");
    EXPECT_TRUE(starts_with("prefix.rest", "prefix"));
    EXPECT_TRUE(ends_with("file.java", ".java"));
    EXPECT_FALSE(ends_with("a", "abc"));
    EXPECT_EQ(trim("  x y \t\n"), "x y");
}
