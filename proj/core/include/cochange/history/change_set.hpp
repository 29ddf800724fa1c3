#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cochange/common/method_id.hpp"
#include "cochange/common/time.hpp"
#include "cochange/history/commit.hpp"

namespace cochange::history {

enum class ChangeSetSource { ApiMapping, OfflineMapping, MergeInference, SingleCommit };

std::string to_string(ChangeSetSource source);
ChangeSetSource parse_change_set_source(const std::string& text);

/// A pull-request-level group of commits.
struct ChangeSet {
    std::string cs_id;
    Instant merged_at{};
    std::set<std::string> commit_shas;
    std::set<MethodId> changed_method_ids;
    ChangeSetSource source = ChangeSetSource::SingleCommit;
};

struct MappingEntry {
    std::string cs_id;
    std::vector<std::string> commits;

    friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

/// cs_id -> commits, as fetched from a hosting API or read from an offline file.
struct PullRequestMapping {
    std::vector<MappingEntry> entries;
};

struct GroupingInputs {
    const PullRequestMapping* api = nullptr;
    const PullRequestMapping* offline = nullptr;
};

/// Assigns each commit to at most one change set. Provider precedence is
/// api > offline > merge inference > singleton. A merge commit M claims
/// every unclaimed commit reachable from its second parent but not from its
/// first parent. Mapped change sets are stamped with their latest commit
/// time, inferred ones with the merge commit's time. Mapping entries that
/// name unknown commits are ignored with a warning. Output is sorted by
/// (merged_at, cs_id); changed_method_ids is left empty.
std::vector<ChangeSet> group_change_sets(std::span<const CommitRecord> commits, const GroupingInputs& inputs,
                                         std::vector<std::string>* warnings = nullptr);

/// Fills changed_method_ids with the union over each set's commits.
void attach_changed_methods(std::span<ChangeSet> change_sets,
                            const std::map<std::string, std::set<MethodId>>& methods_by_commit);

}  // namespace cochange::history
