#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cochange/common/method_id.hpp"
#include "cochange/history/commit.hpp"

namespace cochange::history {

/// Source access for the diff: file text at a revision.
class RevisionReader {
public:
    virtual ~RevisionReader() = default;
    [[nodiscard]] virtual std::optional<std::string> read(const std::string& revision,
                                                          const std::string& path) const = 0;
};

/// Methods changed by `commit` relative to `parent` (nullptr for a root
/// commit, in which case every extracted method counts). A method is
/// changed iff its comment-stripped, whitespace-collapsed declaration text
/// differs between revisions or it exists in exactly one of them. For
/// renamed files, methods are paired by (type, name, parameter types) and
/// identical pairs are suppressed. Files that fail to parse on either side
/// are skipped with a warning. Only `.java` files are considered.
std::set<MethodId> diff_commit_methods(const CommitRecord& commit, const CommitRecord* parent,
                                       std::span<const FileChange> changes, const RevisionReader& reader,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace cochange::history
