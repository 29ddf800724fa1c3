#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "cochange/analysis/methods_io.hpp"
#include "cochange/history/change_set.hpp"
#include "cochange/history/edit_history.hpp"
#include "cochange/history/git_repository.hpp"
#include "cochange/history/history_io.hpp"
#include "cochange/history/method_diff.hpp"
#include "cochange/history/miner.hpp"
#include "support.hpp"

using namespace cochange;
using namespace cochange::history;
using tests::at;
using tests::fixture_sha;

namespace {

CommitRecord commit(const std::string& sha, const std::vector<std::string>& parents, const std::string& when,
                    const std::string& author = "dev@x.io") {
    CommitRecord c;
    c.sha = sha;
    c.parent_shas = parents;
    c.timestamp = at(when);
    c.author = author;
    return c;
}

// a - b ------- m - d
//      \       /
//       f1 - f2
std::vector<CommitRecord> small_graph() {
    return {commit("a", {}, "2022-01-01T00:00:00Z"), commit("b", {"a"}, "2022-01-02T00:00:00Z"),
            commit("f1", {"b"}, "2022-01-03T00:00:00Z"), commit("f2", {"f1"}, "2022-01-04T00:00:00Z"),
            commit("m", {"b", "f2"}, "2022-01-05T00:00:00Z"), commit("d", {"m"}, "2022-01-06T00:00:00Z")};
}

std::map<std::string, std::set<std::string>> by_id(const std::vector<ChangeSet>& sets) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto& cs : sets) out[cs.cs_id] = cs.commit_shas;
    return out;
}

class FakeReader : public RevisionReader {
public:
    std::map<std::pair<std::string, std::string>, std::string> files;
    std::optional<std::string> read(const std::string& rev, const std::string& path) const override {
        auto it = files.find({rev, path});
        if (it == files.end()) return std::nullopt;
        return it->second;
    }
};

std::string names_of(const std::set<MethodId>& ids, const std::vector<analysis::MethodRecord>& methods) {
    std::vector<std::string> names;
    for (const auto& id : ids) {
        auto it = std::find_if(methods.begin(), methods.end(), [&](const auto& m) { return m.method_id == id; });
        names.push_back(it == methods.end() ? id.value : it->type_name + "." + it->name);
    }
    std::sort(names.begin(), names.end());
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
    return out;
}

}  // namespace

TEST(GitLog, ParsesRecordsAndNameStatus) {
    const std::string log =
        "\x1e" "aaa\x1f" "Dev@X.io\x1f" "100\x1f" "\n\nA\tsrc/A.java\n"
        "\x1e" "bbb\x1f" "dev@x.io\x1f" "200\x1f" "aaa\n\nM\tsrc/A.java\nR087\tsrc/B.java\tsrc/C.java\nD\tREADME\n";
    const auto commits = parse_git_log(log);
    ASSERT_EQ(commits.size(), 2U);
    EXPECT_EQ(commits[0].author, "dev@x.io");
    EXPECT_TRUE(commits[0].is_root());
    EXPECT_EQ(to_unix_seconds(commits[1].timestamp), 200);
    EXPECT_EQ(commits[1].parent_shas, (std::vector<std::string>{"aaa"}));
    ASSERT_EQ(commits[1].changes.size(), 3U);
    EXPECT_EQ(commits[1].changes[1], (FileChange{'R', "src/C.java", "src/B.java"}));
    EXPECT_EQ(commits[1].changed_files, (std::vector<std::string>{"README", "src/A.java", "src/B.java", "src/C.java"}));
}

TEST(Grouping, MergeClaimsSecondParentOnlyCommits) {
    const auto commits = small_graph();
    const auto sets = group_change_sets(commits, {});
    const auto ids = by_id(sets);
    ASSERT_EQ(sets.size(), 4U);
    EXPECT_EQ(ids.at("CS-m"), (std::set<std::string>{"f1", "f2", "m"}));
    EXPECT_EQ(ids.at("CS-a"), (std::set<std::string>{"a"}));
    for (const auto& cs : sets) {
        if (cs.cs_id == "CS-m") {
            EXPECT_EQ(cs.source, ChangeSetSource::MergeInference);
            EXPECT_EQ(cs.merged_at, at("2022-01-05T00:00:00Z"));
        }
    }
    EXPECT_TRUE(std::is_sorted(sets.begin(), sets.end(),
                               [](const auto& x, const auto& y) { return x.merged_at < y.merged_at; }));
}

TEST(Grouping, ProviderPrecedence) {
    const auto commits = small_graph();
    const PullRequestMapping api{{{"PR-1", {"f1"}}}};
    const PullRequestMapping offline{{{"PR-9", {"f1", "f2", "b"}}, {"PR-10", {"zzz"}}}};
    std::vector<std::string> warnings;
    const auto sets = group_change_sets(commits, {&api, &offline}, &warnings);
    const auto ids = by_id(sets);
    EXPECT_EQ(ids.at("PR-1"), (std::set<std::string>{"f1"}));
    EXPECT_EQ(ids.at("PR-9"), (std::set<std::string>{"b", "f2"}));  // f1 already taken by the api
    EXPECT_EQ(ids.at("CS-m"), (std::set<std::string>{"m"}));
    EXPECT_FALSE(ids.contains("PR-10"));
    ASSERT_EQ(warnings.size(), 1U);
    EXPECT_NE(warnings[0].find("zzz"), std::string::npos);
    for (const auto& cs : sets) {
        if (cs.cs_id == "PR-9") EXPECT_EQ(cs.merged_at, at("2022-01-04T00:00:00Z"));
    }
}

TEST(Grouping, EveryCommitInExactlyOneSet) {
    const auto commits = small_graph();
    const PullRequestMapping offline{{{"PR-2", {"d", "a"}}}};
    const auto sets = group_change_sets(commits, {nullptr, &offline});
    std::multiset<std::string> all;
    for (const auto& cs : sets) all.insert(cs.commit_shas.begin(), cs.commit_shas.end());
    for (const auto& c : commits) EXPECT_EQ(all.count(c.sha), 1U) << c.sha;
}

TEST(EditHistories, GroupsAndOrdersEvents) {
    std::vector<ChangeSet> sets(2);
    sets[0].cs_id = "A";
    sets[1].cs_id = "B";
    const MethodId m("m");
    const std::vector<MethodChangeEvent> events{
        {m, "B", "s2", "y@x.io", at("2022-02-01T00:00:00Z")},
        {m, "A", "s1", "x@x.io", at("2022-01-01T00:00:00Z")},
        {MethodId("n"), "A", "s1", "x@x.io", at("2022-01-01T00:00:00Z")},
    };
    const auto h = build_edit_histories(sets, events);
    ASSERT_EQ(h.size(), 2U);
    const auto& hm = h.at(m);
    ASSERT_EQ(hm.events.size(), 2U);
    EXPECT_EQ(hm.events[0].commit_sha, "s1");
    EXPECT_EQ(hm.authors, (std::set<std::string>{"x@x.io", "y@x.io"}));
    const TimeRange jan{at("2022-01-01T00:00:00Z"), at("2022-02-01T00:00:00Z")};
    EXPECT_TRUE(hm.has_event_in(jan));
    EXPECT_EQ(hm.authors_in(jan), (std::set<std::string>{"x@x.io"}));
    EXPECT_FALSE(hm.has_event_in({at("2023-01-01T00:00:00Z"), at("2024-01-01T00:00:00Z")}));

    const std::vector<MethodChangeEvent> orphan{{m, "nope", "s", "x", at("2022-01-01T00:00:00Z")}};
    EXPECT_THROW(build_edit_histories(sets, orphan), DataError);
}

TEST(HistoryIo, RoundTrips) {
    auto commits = small_graph();
    commits[1].changes = {{'M', "A.java", ""}, {'R', "C.java", "B.java"}};
    commits[1].changed_files = {"A.java", "B.java", "C.java"};
    std::stringstream cs;
    write_commits_jsonl(cs, commits);
    const auto commits_back = read_commits_jsonl(cs);
    ASSERT_EQ(commits_back.size(), commits.size());
    EXPECT_EQ(commits_back[1].changes, commits[1].changes);
    EXPECT_EQ(commits_back[4].parent_shas, commits[4].parent_shas);

    auto sets = group_change_sets(commits, {});
    sets[0].changed_method_ids = {MethodId("m1"), MethodId("m2")};
    std::stringstream ss;
    write_change_sets_jsonl(ss, sets);
    const auto sets_back = read_change_sets_jsonl(ss);
    ASSERT_EQ(sets_back.size(), sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        EXPECT_EQ(sets_back[i].cs_id, sets[i].cs_id);
        EXPECT_EQ(sets_back[i].merged_at, sets[i].merged_at);
        EXPECT_EQ(sets_back[i].commit_shas, sets[i].commit_shas);
        EXPECT_EQ(sets_back[i].changed_method_ids, sets[i].changed_method_ids);
        EXPECT_EQ(sets_back[i].source, sets[i].source);
    }

    const std::vector<MethodChangeEvent> events{{MethodId("m1"), sets[0].cs_id, "a", "dev@x.io", sets[0].merged_at}};
    const auto histories = build_edit_histories(sets, events);
    std::stringstream hs;
    write_histories_jsonl(hs, histories);
    const auto histories_back = read_histories_jsonl(hs);
    ASSERT_EQ(histories_back.size(), 1U);
    EXPECT_EQ(histories_back.at(MethodId("m1")).events, histories.at(MethodId("m1")).events);

    const PullRequestMapping mapping{{{"PR-1", {"a", "b"}}, {"PR-2", {"c"}}}};
    std::stringstream ms;
    write_mapping_jsonl(ms, mapping);
    EXPECT_EQ(read_mapping_jsonl(ms).entries, mapping.entries);
}

TEST(HistoryIo, SchemaErrorsNameTheLine) {
    std::istringstream in("{\"cs_id\":\"x\",\"merged_at\":\"2022-01-01T00:00:00Z\",\"commits\":[\"a\"],\"source\":\"single-commit\",\"methods\":[]}\n{\"cs_id\":1}\n");
    try {
        (void)read_change_sets_jsonl(in, "changesets.jsonl");
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("changesets.jsonl:2"), std::string::npos) << e.what();
    }
    std::istringstream bad_source("{\"cs_id\":\"x\",\"merged_at\":\"2022-01-01T00:00:00Z\",\"commits\":[],\"source\":\"guess\",\"methods\":[]}\n");
    EXPECT_THROW(read_change_sets_jsonl(bad_source), SchemaError);
}

TEST(MethodDiff, RootCommitCountsEveryMethod) {
    FakeReader reader;
    reader.files[{"r1", "A.java"}] = "class A { void f() {} void g() {} }";
    reader.files[{"r1", "notes.txt"}] = "hello";
    const auto c = commit("r1", {}, "2022-01-01T00:00:00Z");
    const std::vector<FileChange> changes{{'A', "A.java", ""}, {'A', "notes.txt", ""}};
    EXPECT_EQ(diff_commit_methods(c, nullptr, changes, reader).size(), 2U);
}

TEST(MethodDiff, CommentAndWhitespaceEditsAreNotChanges) {
    FakeReader reader;
    reader.files[{"p", "A.java"}] = "class A {\n void f() { return; }\n void g() { x(); }\n}";
    reader.files[{"c", "A.java"}] = "class A {\n void f() {\n   // why\n   return;\n }\n void g() { y(); }\n}";
    const auto parent = commit("p", {}, "2022-01-01T00:00:00Z");
    const auto child = commit("c", {"p"}, "2022-01-02T00:00:00Z");
    const auto changed = diff_commit_methods(child, &parent, std::vector<FileChange>{{'M', "A.java", ""}}, reader);
    ASSERT_EQ(changed.size(), 1U);
    EXPECT_EQ(*changed.begin(), make_method_id("A.java", "A", "g", {}));
}

TEST(MethodDiff, AddedDeletedAndRenamedFiles) {
    FakeReader reader;
    reader.files[{"p", "old/A.java"}] = "class A { void f() { a(); } void g() { b(); } }";
    reader.files[{"p", "Gone.java"}] = "class Gone { void h() {} }";
    reader.files[{"c", "new/A.java"}] = "class A { void f() { a(); } void g() { c(); } }";
    reader.files[{"c", "New.java"}] = "class New { void k() {} }";
    const auto parent = commit("p", {}, "2022-01-01T00:00:00Z");
    const auto child = commit("c", {"p"}, "2022-01-02T00:00:00Z");
    const std::vector<FileChange> changes{
        {'R', "new/A.java", "old/A.java"}, {'D', "Gone.java", ""}, {'A', "New.java", ""}};
    const auto changed = diff_commit_methods(child, &parent, changes, reader);
    const std::set<MethodId> expected{make_method_id("new/A.java", "A", "g", {}), make_method_id("Gone.java", "Gone", "h", {}),
                                      make_method_id("New.java", "New", "k", {})};
    EXPECT_EQ(changed, expected);
}

TEST(MethodDiff, UnparsableFileIsSkippedWithWarning) {
    FakeReader reader;
    reader.files[{"p", "A.java"}] = "class A { void f() {} }";
    reader.files[{"c", "A.java"}] = "class A { void f() { ";
    const auto parent = commit("p", {}, "2022-01-01T00:00:00Z");
    const auto child = commit("c", {"p"}, "2022-01-02T00:00:00Z");
    std::vector<std::string> warnings;
    const auto changed =
        diff_commit_methods(child, &parent, std::vector<FileChange>{{'M', "A.java", ""}}, reader, &warnings);
    EXPECT_TRUE(changed.empty());
    EXPECT_EQ(warnings.size(), 1U);
}

TEST(Repository, RejectsNonRepository) {
    tests::TempDir dir;
    EXPECT_THROW(GitRepository::open(dir.path()), NotARepositoryError);
}

TEST(Repository, EmptyRepositoryHasNoHead) {
    tests::TempDir dir;
    ASSERT_EQ(tests::run_command({"git", "init", "-q", dir.path().string()}).status, 0);
    const auto repo = GitRepository::open(dir.path());
    EXPECT_FALSE(repo.head().has_value());
}

TEST(Fixture, ScanSeesEveryCommitInTopologicalOrder) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    const auto commits = repo.scan(kDistantFuture);
    ASSERT_EQ(commits.size(), 18U);
    std::set<std::string> seen;
    for (const auto& c : commits) {
        for (const auto& p : c.parent_shas) EXPECT_TRUE(seen.contains(p));
        seen.insert(c.sha);
    }
    EXPECT_EQ(commits.front().sha, fixture_sha("c1"));
    EXPECT_EQ(commits.back().sha, fixture_sha("c15"));
    for (const auto& c : commits) {
        if (c.sha == fixture_sha("c2")) EXPECT_EQ(c.author, "bob@acme.io");  // committed as Bob@Acme.io
    }
}

TEST(Fixture, UntilDropsLaterCommits) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    const auto commits = repo.scan(at("2022-03-04T00:00:00Z"));
    std::set<std::string> shas;
    for (const auto& c : commits) shas.insert(c.sha);
    EXPECT_EQ(shas, (std::set<std::string>{fixture_sha("c1"), fixture_sha("c2"), fixture_sha("c3"), fixture_sha("c4"),
                                           fixture_sha("c5")}));
    EXPECT_EQ(scan_tip(commits, repo.head()), fixture_sha("c5"));
}

TEST(Fixture, RevisionBeforeFollowsFirstParents) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    const auto commits = repo.scan(kDistantFuture);
    const auto tip = fixture_sha("c15");
    EXPECT_EQ(revision_before(commits, tip, at("2022-07-06T00:00:00Z")), fixture_sha("c7"));
    EXPECT_EQ(revision_before(commits, tip, at("2023-01-02T00:00:00Z")), fixture_sha("c11"));
    // c4 is newer than c5's parent but only reachable through m1's second parent.
    EXPECT_EQ(revision_before(commits, tip, at("2022-03-04T00:00:00Z")), fixture_sha("c5"));
    EXPECT_FALSE(revision_before(commits, tip, at("2022-01-01T00:00:00Z")).has_value());
}

TEST(Fixture, MethodsChangedByCommentOnlyCommit) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    const auto commits = repo.scan(kDistantFuture);
    const auto methods = load_snapshot(repo, fixture_sha("c15")).methods;
    for (const auto& c : commits) {
        if (c.sha == fixture_sha("c6")) EXPECT_EQ(names_of(methods_changed_by(repo, c), methods), "Strings.join");
        if (c.sha == fixture_sha("m1")) EXPECT_EQ(names_of(methods_changed_by(repo, c), methods), "");
        if (c.sha == fixture_sha("c15")) EXPECT_TRUE(methods_changed_by(repo, c).empty());
    }
}

TEST(Fixture, SnapshotHasTwelveMethodsAtHead) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    const auto snap = load_snapshot(repo, fixture_sha("c15"));
    EXPECT_EQ(snap.methods.size(), 12U);
    EXPECT_TRUE(snap.warnings.empty());
    std::size_t tests_found = 0;
    for (const auto& m : snap.methods) tests_found += m.is_test ? 1 : 0;
    EXPECT_EQ(tests_found, 2U);
}

TEST(Fixture, ParallelMiningMatchesSerial) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    MiningOptions serial;
    MiningOptions parallel;
    parallel.jobs = 4;
    const auto a = mine_repository(repo, serial);
    const auto b = mine_repository(repo, parallel);
    std::stringstream sa, sb, ha, hb;
    write_change_sets_jsonl(sa, a.change_sets);
    write_change_sets_jsonl(sb, b.change_sets);
    write_histories_jsonl(ha, a.histories);
    write_histories_jsonl(hb, b.histories);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(ha.str(), hb.str());
}

TEST(Fixture, OfflineMappingReplacesMergeInference) {
    const auto repo = GitRepository::open(tests::fixture_repo());
    MiningOptions options;
    options.offline_mapping = PullRequestMapping{{{"PR-7", {fixture_sha("c8"), fixture_sha("c9"), fixture_sha("m2")}}}};
    const auto mined = mine_repository(repo, options);
    EXPECT_EQ(mined.change_sets.size(), 12U);
    bool found = false;
    for (const auto& cs : mined.change_sets) {
        if (cs.cs_id != "PR-7") continue;
        found = true;
        EXPECT_EQ(cs.source, ChangeSetSource::OfflineMapping);
        EXPECT_EQ(cs.merged_at, at("2022-08-05T10:00:00Z"));
        EXPECT_EQ(cs.changed_method_ids.size(), 3U);
    }
    EXPECT_TRUE(found);
}
