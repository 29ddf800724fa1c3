#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cochange/common/rng.hpp"
#include "cochange/dataset/features.hpp"
#include "cochange/history/miner.hpp"
#include "support.hpp"

using namespace cochange;
using namespace cochange::dataset;
using tests::at;

namespace {

std::string random_path(Rng& rng) {
    static const std::vector<std::string> parts{"a", "b", "c", "d", "src", "main"};
    std::string p;
    const auto n = rng.uniform_index(5);
    for (std::size_t i = 0; i < n; ++i) p += (i ? "/" : "") + parts[rng.uniform_index(parts.size())];
    return p;
}

struct MinedFixture {
    history::MiningResult mined;
    std::vector<analysis::MethodRecord> at_c7;

    static const MinedFixture& get() {
        static const MinedFixture f = [] {
            MinedFixture x;
            const auto repo = history::GitRepository::open(tests::fixture_repo());
            x.mined = history::mine_repository(repo, {});
            x.at_c7 = history::load_snapshot(repo, tests::fixture_sha("c7")).methods;
            return x;
        }();
        return f;
    }

    MethodId id(const std::string& type, const std::string& name) const {
        for (const auto& m : at_c7) {
            if (m.type_name == type && m.name == name) return m.method_id;
        }
        throw std::runtime_error("no method " + type + "." + name);
    }
};

}  // namespace

TEST(PathSimilarity, WorkedExample) {
    EXPECT_DOUBLE_EQ(path_similarity("a/b/c", "a/d"), 1.0 / 3.0);
}

TEST(PathSimilarity, EdgeCases) {
    EXPECT_DOUBLE_EQ(path_similarity("", ""), 1.0);
    EXPECT_DOUBLE_EQ(path_similarity("a", ""), 0.0);
    EXPECT_DOUBLE_EQ(path_similarity("a/b", "a/b"), 1.0);
    EXPECT_DOUBLE_EQ(path_similarity("a/a/b", "a/b/b"), 2.0 / 3.0);  // multiset intersection
    EXPECT_DOUBLE_EQ(path_similarity("acme.order", "acme.invoice", '.'), 0.5);
}

TEST(PathSimilarity, SymmetricBoundedAndReflexive) {
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_path(rng);
        const auto b = random_path(rng);
        const double s = path_similarity(a, b);
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 1.0);
        ASSERT_DOUBLE_EQ(s, path_similarity(b, a));
        ASSERT_DOUBLE_EQ(path_similarity(a, a), 1.0);
    }
}

TEST(Jaccard, Values) {
    EXPECT_DOUBLE_EQ(jaccard_similarity({"a", "b"}, {"b", "c"}), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(jaccard_similarity({}, {}), 1.0);
    EXPECT_DOUBLE_EQ(jaccard_similarity({"a"}, {}), 0.0);
    EXPECT_DOUBLE_EQ(jaccard_similarity({"a"}, {"a"}), 1.0);
}

TEST(Hierarchy, SharedAncestor) {
    const std::vector<std::string> a{"Shape", "Base"};
    const std::vector<std::string> b{"Widget", "Base"};
    const std::vector<std::string> c{"Other"};
    const std::vector<std::string> none{};
    EXPECT_TRUE(share_superclass(a, b));
    EXPECT_FALSE(share_superclass(a, c));
    EXPECT_FALSE(share_superclass(none, none));
    const std::vector<std::string> object{"Object"};
    EXPECT_FALSE(share_superclass(object, object));
}

TEST(CoChange, IndexMatchesDirectCount) {
    Rng rng(23);
    std::vector<history::ChangeSet> sets;
    for (int i = 0; i < 80; ++i) {
        history::ChangeSet cs;
        cs.cs_id = "cs" + std::to_string(i);
        cs.merged_at = at("2022-01-01T00:00:00Z") + Days{static_cast<int>(rng.uniform_index(365))};
        for (int m = 0; m < 10; ++m) {
            if (rng.uniform01() < 0.3) cs.changed_method_ids.insert(MethodId("m" + std::to_string(m)));
        }
        sets.push_back(cs);
    }
    const TimeRange period{at("2022-03-01T00:00:00Z"), at("2022-09-01T00:00:00Z")};
    const CoChangeIndex index(sets, period);
    for (int a = 0; a < 11; ++a) {
        for (int b = 0; b < 11; ++b) {
            const MethodId x("m" + std::to_string(a)), y("m" + std::to_string(b));
            int expected = 0;
            for (const auto& cs : sets) {
                if (period.contains(cs.merged_at) && cs.changed_method_ids.contains(x) && cs.changed_method_ids.contains(y)) {
                    ++expected;
                }
            }
            ASSERT_EQ(index.count(x, y), expected);
            ASSERT_EQ(co_change_count(x, y, sets, period), expected);
        }
    }
}

TEST(FeatureVector, ArrayRoundTripAndRanges) {
    FeatureVector v;
    v.co_change_count = 4;
    v.author_similarity = 0.5;
    v.semantic_similarity = -0.25;
    v.path_similarity = 0.75;
    v.code_dependency = 2;
    v.hierarchy_similarity = true;
    v.clone_similarity = 88;
    v.package_similarity = 1;
    v.arg_type_similarity = 0.2;
    v.arg_name_similarity = 0.1;
    EXPECT_EQ(FeatureVector::from_array(v.to_array()), v);
    EXPECT_DOUBLE_EQ(v.get(Feature::CloneSimilarity), 88.0);
    EXPECT_EQ(feature_names()[static_cast<std::size_t>(Feature::PackageSimilarity)], "package_similarity");
    EXPECT_EQ(feature_index("co_change_count"), 0U);
    EXPECT_FALSE(feature_index("nope").has_value());

    auto bad = v.to_array();
    bad[0] = -1;
    EXPECT_THROW(FeatureVector::from_array(bad), DataError);
    bad = v.to_array();
    bad[static_cast<std::size_t>(Feature::PathSimilarity)] = 1.5;
    EXPECT_THROW(FeatureVector::from_array(bad), DataError);
    bad = v.to_array();
    bad[static_cast<std::size_t>(Feature::CloneSimilarity)] = 101;
    EXPECT_THROW(FeatureVector::from_array(bad), DataError);
}

TEST(FeatureContext, FixturePairTotalRender) {
    const auto& f = MinedFixture::get();
    const TimeRange period{at("2022-01-10T10:00:00Z"), at("2022-07-06T00:00:00Z")};
    const FeatureContext ctx(FeatureInputs{f.at_c7, &f.mined.histories, f.mined.change_sets, period, nullptr});
    const auto total = f.id("Order", "total");
    const auto render = f.id("Invoice", "render");
    const auto v = ctx.compute(total, render);
    EXPECT_EQ(v.co_change_count, 3);  // c1, m1, c7
    EXPECT_DOUBLE_EQ(v.author_similarity, 1.0);
    EXPECT_DOUBLE_EQ(v.path_similarity, 4.0 / 6.0);
    EXPECT_EQ(v.code_dependency, 1);  // render calls total
    EXPECT_FALSE(v.hierarchy_similarity);
    EXPECT_DOUBLE_EQ(v.package_similarity, 0.5);
    EXPECT_DOUBLE_EQ(v.arg_type_similarity, 0.0);
    EXPECT_DOUBLE_EQ(v.arg_name_similarity, 0.0);
    EXPECT_GE(v.semantic_similarity, -1.0);
    EXPECT_LE(v.semantic_similarity, 1.0);
    EXPECT_NO_THROW(check_ranges(v));
}

TEST(FeatureContext, FixturePairTotalAddItem) {
    const auto& f = MinedFixture::get();
    const TimeRange period{at("2022-01-10T10:00:00Z"), at("2022-07-06T00:00:00Z")};
    const FeatureContext ctx(FeatureInputs{f.at_c7, &f.mined.histories, f.mined.change_sets, period, nullptr});
    const auto v = ctx.compute(f.id("Order", "total"), f.id("Order", "addItem"));
    EXPECT_EQ(v.co_change_count, 2);  // c1, m1; c11 lies in the label period
    EXPECT_DOUBLE_EQ(v.path_similarity, 1.0);
    EXPECT_DOUBLE_EQ(v.package_similarity, 1.0);
    EXPECT_TRUE(v.hierarchy_similarity);  // both in Order, which extends Base
    // total: {alice, bob}; addItem: {alice (c1), bob (c4)}
    EXPECT_DOUBLE_EQ(v.author_similarity, 1.0);
    EXPECT_EQ(v.code_dependency, 0);
}

TEST(FeatureContext, SymmetricFeatures) {
    const auto& f = MinedFixture::get();
    const TimeRange period{at("2022-01-10T10:00:00Z"), at("2022-07-06T00:00:00Z")};
    const FeatureContext ctx(FeatureInputs{f.at_c7, &f.mined.histories, f.mined.change_sets, period, nullptr});
    for (const auto& a : f.at_c7) {
        for (const auto& b : f.at_c7) {
            if (a.method_id == b.method_id) continue;
            const auto x = ctx.compute(a.method_id, b.method_id);
            const auto y = ctx.compute(b.method_id, a.method_id);
            ASSERT_EQ(x, y) << a.name << " " << b.name;
            ASSERT_NO_THROW(check_ranges(x));
        }
    }
    EXPECT_THROW((void)ctx.compute(MethodId("missing"), f.id("Order", "total")), DataError);
}

TEST(FeatureContext, ExternalEmbeddingsUsedWhenBothSidesHaveVectors) {
    const auto& f = MinedFixture::get();
    const auto total = f.id("Order", "total");
    const auto render = f.id("Invoice", "render");
    const auto join = f.id("Strings", "join");
    std::stringstream ss;
    ss << "{\"method_id\":\"" << total.value << "\",\"values\":[1,0]}\n";
    ss << "{\"method_id\":\"" << render.value << "\",\"values\":[1,1]}\n";
    const auto external = analysis::ExternalEmbeddings::parse(ss);
    const TimeRange period{at("2022-01-10T10:00:00Z"), at("2022-07-06T00:00:00Z")};
    const FeatureContext with(FeatureInputs{f.at_c7, &f.mined.histories, f.mined.change_sets, period, &external});
    const FeatureContext without(FeatureInputs{f.at_c7, &f.mined.histories, f.mined.change_sets, period, nullptr});
    EXPECT_NEAR(with.compute(total, render).semantic_similarity, 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(with.compute(total, join).semantic_similarity, without.compute(total, join).semantic_similarity);
}
