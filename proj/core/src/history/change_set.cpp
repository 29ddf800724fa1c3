#include "cochange/history/change_set.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "cochange/common/error.hpp"

namespace cochange::history {

std::string to_string(ChangeSetSource source) {
    switch (source) {
        case ChangeSetSource::ApiMapping: return "api-mapping";
        case ChangeSetSource::OfflineMapping: return "offline-mapping";
        case ChangeSetSource::MergeInference: return "merge-inference";
        case ChangeSetSource::SingleCommit: return "single-commit";
    }
    return "single-commit";
}

ChangeSetSource parse_change_set_source(const std::string& text) {
    if (text == "api-mapping") return ChangeSetSource::ApiMapping;
    if (text == "offline-mapping") return ChangeSetSource::OfflineMapping;
    if (text == "merge-inference") return ChangeSetSource::MergeInference;
    if (text == "single-commit") return ChangeSetSource::SingleCommit;
    throw SchemaError("unknown change set source '" + text + "'");
}

std::vector<ChangeSet> group_change_sets(std::span<const CommitRecord> commits, const GroupingInputs& inputs,
                                         std::vector<std::string>* warnings) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < commits.size(); ++i) index.emplace(commits[i].sha, i);

    std::vector<bool> claimed(commits.size(), false);
    std::vector<ChangeSet> out;

    auto apply_mapping = [&](const PullRequestMapping* mapping, ChangeSetSource source) {
        if (!mapping) return;
        for (const auto& entry : mapping->entries) {
            ChangeSet cs;
            cs.cs_id = entry.cs_id;
            cs.source = source;
            cs.merged_at = kDistantPast;
            for (const auto& sha : entry.commits) {
                auto it = index.find(sha);
                if (it == index.end()) {
                    if (warnings) warnings->push_back(entry.cs_id + ": unknown commit " + sha + " ignored");
                    continue;
                }
                if (claimed[it->second]) continue;
                claimed[it->second] = true;
                cs.commit_shas.insert(sha);
                cs.merged_at = std::max(cs.merged_at, commits[it->second].timestamp);
            }
            if (!cs.commit_shas.empty()) out.push_back(std::move(cs));
        }
    };
    apply_mapping(inputs.api, ChangeSetSource::ApiMapping);
    apply_mapping(inputs.offline, ChangeSetSource::OfflineMapping);

    auto ancestors = [&](std::size_t start) {
        std::unordered_set<std::size_t> seen{start};
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (const auto& p : commits[i].parent_shas) {
                auto it = index.find(p);
                if (it != index.end() && seen.insert(it->second).second) stack.push_back(it->second);
            }
        }
        return seen;
    };

    // Commits are topologically ordered, so earlier merges claim first.
    for (std::size_t m = 0; m < commits.size(); ++m) {
        const CommitRecord& merge = commits[m];
        if (!merge.is_merge() || claimed[m]) continue;
        ChangeSet cs;
        cs.cs_id = "CS-" + merge.sha;
        cs.source = ChangeSetSource::MergeInference;
        cs.merged_at = merge.timestamp;
        cs.commit_shas.insert(merge.sha);
        claimed[m] = true;
        auto second = index.find(merge.parent_shas[1]);
        auto first = index.find(merge.parent_shas[0]);
        if (second != index.end()) {
            const auto from_first = first != index.end() ? ancestors(first->second) : std::unordered_set<std::size_t>{};
            for (std::size_t c : ancestors(second->second)) {
                if (claimed[c] || from_first.contains(c)) continue;
                claimed[c] = true;
                cs.commit_shas.insert(commits[c].sha);
            }
        }
        out.push_back(std::move(cs));
    }

    for (std::size_t i = 0; i < commits.size(); ++i) {
        if (claimed[i]) continue;
        ChangeSet cs;
        cs.cs_id = "CS-" + commits[i].sha;
        cs.source = ChangeSetSource::SingleCommit;
        cs.merged_at = commits[i].timestamp;
        cs.commit_shas.insert(commits[i].sha);
        out.push_back(std::move(cs));
    }

    std::sort(out.begin(), out.end(), [](const ChangeSet& a, const ChangeSet& b) {
        return a.merged_at != b.merged_at ? a.merged_at < b.merged_at : a.cs_id < b.cs_id;
    });
    return out;
}

void attach_changed_methods(std::span<ChangeSet> change_sets,
                            const std::map<std::string, std::set<MethodId>>& methods_by_commit) {
    for (auto& cs : change_sets) {
        cs.changed_method_ids.clear();
        for (const auto& sha : cs.commit_shas) {
            auto it = methods_by_commit.find(sha);
            if (it != methods_by_commit.end()) cs.changed_method_ids.insert(it->second.begin(), it->second.end());
        }
    }
}

}  // namespace cochange::history
