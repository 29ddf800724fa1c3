#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cochange/analysis/snapshot.hpp"
#include "cochange/history/change_set.hpp"
#include "cochange/history/commit.hpp"
#include "cochange/history/edit_history.hpp"
#include "cochange/history/git_repository.hpp"
#include "cochange/history/method_diff.hpp"

namespace cochange::history {

struct MiningOptions {
    Instant until = kDistantFuture;
    std::optional<PullRequestMapping> api_mapping;
    std::optional<PullRequestMapping> offline_mapping;
    unsigned jobs = 1;
};

struct MiningResult {
    std::vector<CommitRecord> commits;  // topological order
    std::vector<ChangeSet> change_sets;
    std::vector<MethodChangeEvent> events;
    EditHistories histories;
    std::map<std::string, std::set<MethodId>> methods_by_commit;
    std::vector<std::string> warnings;
};

/// Scans, diffs and groups a repository. Merge commits contribute only the
/// methods whose text differs from every parent (conflict resolutions and
/// other edits made in the merge itself); their branch commits carry the
/// rest. Commit diffs run on `jobs` workers and are merged in topological
/// order.
MiningResult mine_repository(const GitRepository& repo, const MiningOptions& options);

/// Methods changed by one commit, as mine_repository computes them.
std::set<MethodId> methods_changed_by(const GitRepository& repo, const CommitRecord& commit,
                                      std::vector<std::string>* warnings = nullptr);

/// Newest commit on the first-parent chain from `tip` whose timestamp is
/// before `t`. `commits` must contain the chain (as scan returns it).
std::optional<std::string> revision_before(std::span<const CommitRecord> commits, const std::string& tip, Instant t);

/// HEAD when it was scanned, otherwise the newest scanned commit that is no
/// other scanned commit's parent.
std::optional<std::string> scan_tip(std::span<const CommitRecord> commits, const std::optional<std::string>& head);

/// Parses every .java file of `revision`.
analysis::Snapshot load_snapshot(const GitRepository& repo, const std::string& revision, unsigned jobs = 1);

/// Repository-backed RevisionReader.
class GitRevisionReader final : public RevisionReader {
public:
    explicit GitRevisionReader(const GitRepository& repo) : repo_(repo) {}
    [[nodiscard]] std::optional<std::string> read(const std::string& revision,
                                                  const std::string& path) const override {
        return repo_.read_file(revision, path);
    }

private:
    const GitRepository& repo_;
};

}  // namespace cochange::history
