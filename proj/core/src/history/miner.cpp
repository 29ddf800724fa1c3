#include "cochange/history/miner.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_map>

#include "cochange/common/parallel.hpp"
#include "cochange/common/text.hpp"
#include "cochange/history/method_diff.hpp"

namespace cochange::history {

std::set<MethodId> methods_changed_by(const GitRepository& repo, const CommitRecord& commit,
                                      std::vector<std::string>* warnings) {
    const GitRevisionReader reader(repo);
    if (commit.is_root()) return diff_commit_methods(commit, nullptr, commit.changes, reader, warnings);

    CommitRecord first_parent;
    first_parent.sha = commit.parent_shas.front();
    std::set<MethodId> result = diff_commit_methods(commit, &first_parent, commit.changes, reader, warnings);
    for (std::size_t p = 1; p < commit.parent_shas.size() && !result.empty(); ++p) {
        CommitRecord parent;
        parent.sha = commit.parent_shas[p];
        const auto changes = repo.diff_files(parent.sha, commit.sha);
        const auto against = diff_commit_methods(commit, &parent, changes, reader, warnings);
        std::set<MethodId> both;
        std::set_intersection(result.begin(), result.end(), against.begin(), against.end(),
                              std::inserter(both, both.end()));
        result = std::move(both);
    }
    return result;
}

MiningResult mine_repository(const GitRepository& repo, const MiningOptions& options) {
    MiningResult result;
    result.commits = repo.scan(options.until);

    std::vector<std::set<MethodId>> per_commit(result.commits.size());
    std::vector<std::vector<std::string>> per_commit_warnings(result.commits.size());
    parallel_for(result.commits.size(), options.jobs, [&](std::size_t i) {
        per_commit[i] = methods_changed_by(repo, result.commits[i], &per_commit_warnings[i]);
    });
    for (std::size_t i = 0; i < result.commits.size(); ++i) {
        result.methods_by_commit[result.commits[i].sha] = per_commit[i];
        for (auto& w : per_commit_warnings[i]) result.warnings.push_back(std::move(w));
    }

    GroupingInputs inputs;
    if (options.api_mapping) inputs.api = &*options.api_mapping;
    if (options.offline_mapping) inputs.offline = &*options.offline_mapping;
    result.change_sets = group_change_sets(result.commits, inputs, &result.warnings);
    attach_changed_methods(result.change_sets, result.methods_by_commit);

    std::unordered_map<std::string, const std::string*> cs_of_commit;
    for (const auto& cs : result.change_sets) {
        for (const auto& sha : cs.commit_shas) cs_of_commit[sha] = &cs.cs_id;
    }
    for (std::size_t i = 0; i < result.commits.size(); ++i) {
        const auto& c = result.commits[i];
        for (const auto& id : per_commit[i]) {
            result.events.push_back(MethodChangeEvent{id, *cs_of_commit.at(c.sha), c.sha, c.author, c.timestamp});
        }
    }
    result.histories = build_edit_histories(result.change_sets, result.events);
    return result;
}

std::optional<std::string> revision_before(std::span<const CommitRecord> commits, const std::string& tip, Instant t) {
    std::unordered_map<std::string, const CommitRecord*> by_sha;
    for (const auto& c : commits) by_sha.emplace(c.sha, &c);
    auto it = by_sha.find(tip);
    while (it != by_sha.end()) {
        const CommitRecord& c = *it->second;
        if (c.timestamp < t) return c.sha;
        if (c.parent_shas.empty()) break;
        it = by_sha.find(c.parent_shas.front());
    }
    return std::nullopt;
}

std::optional<std::string> scan_tip(std::span<const CommitRecord> commits, const std::optional<std::string>& head) {
    if (commits.empty()) return std::nullopt;
    if (head) {
        for (const auto& c : commits) {
            if (c.sha == *head) return c.sha;
        }
    }
    std::set<std::string> parents;
    for (const auto& c : commits) parents.insert(c.parent_shas.begin(), c.parent_shas.end());
    const CommitRecord* best = nullptr;
    for (const auto& c : commits) {
        if (parents.contains(c.sha)) continue;
        if (!best || best->timestamp < c.timestamp) best = &c;
    }
    return best ? std::optional<std::string>(best->sha) : std::nullopt;
}

analysis::Snapshot load_snapshot(const GitRepository& repo, const std::string& revision, unsigned jobs) {
    std::vector<std::string> paths;
    for (auto& p : repo.list_files(revision)) {
        if (ends_with(p, ".java")) paths.push_back(std::move(p));
    }
    std::vector<analysis::SourceFile> files(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        files[i].path = paths[i];
        files[i].content = repo.read_file(revision, paths[i]).value_or("");
    }
    return analysis::build_snapshot(revision, files, jobs);
}

}  // namespace cochange::history
