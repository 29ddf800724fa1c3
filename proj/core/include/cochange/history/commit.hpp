#pragma once

#include <string>
#include <vector>

#include "cochange/common/time.hpp"

namespace cochange::history {

/// One entry of a name-status diff. status is the git letter (A, M, D, R,
/// C, T); old_path is set for renames and copies.
struct FileChange {
    char status = 'M';
    std::string path;
    std::string old_path;

    friend bool operator==(const FileChange&, const FileChange&) = default;
};

struct CommitRecord {
    std::string sha;
    std::string author;  // lowercased author email
    Instant timestamp{};
    std::vector<std::string> parent_shas;
    std::vector<std::string> changed_files;  // sorted, unique; both sides of renames
    std::vector<FileChange> changes;         // against the first parent (or the empty tree)

    [[nodiscard]] bool is_root() const noexcept { return parent_shas.empty(); }
    [[nodiscard]] bool is_merge() const noexcept { return parent_shas.size() > 1; }
};

}  // namespace cochange::history
