#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cochange/common/error.hpp"
#include "cochange/history/commit.hpp"

namespace cochange::history {

class GitError : public DataError {
public:
    using DataError::DataError;
};

class NotARepositoryError : public GitError {
public:
    using GitError::GitError;
};

class PipedProcess;

/// Read-only access to a git repository through the `git` executable.
class GitRepository {
public:
    /// Throws NotARepositoryError when `path` is not inside a work tree or
    /// bare repository.
    static GitRepository open(const std::filesystem::path& path);

    GitRepository(GitRepository&&) noexcept;
    GitRepository& operator=(GitRepository&&) noexcept;
    ~GitRepository();

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

    /// Commit of HEAD, or nullopt for a repository without commits.
    [[nodiscard]] std::optional<std::string> head() const;

    /// All commits reachable from HEAD with timestamp <= until, parents
    /// before children. Timestamps are committer times.
    [[nodiscard]] std::vector<CommitRecord> scan(Instant until) const;

    /// Name-status diff between two revisions, with rename detection.
    [[nodiscard]] std::vector<FileChange> diff_files(const std::string& from, const std::string& to) const;

    /// File content at a revision, nullopt when the path does not exist there.
    [[nodiscard]] std::optional<std::string> read_file(const std::string& revision, const std::string& path) const;

    /// Paths of all files in the tree of `revision`.
    [[nodiscard]] std::vector<std::string> list_files(const std::string& revision) const;

    /// Runs `git -C <path> <args...>` and returns stdout; throws GitError on failure.
    [[nodiscard]] std::string git(const std::vector<std::string>& args) const;

private:
    explicit GitRepository(std::filesystem::path path);

    std::filesystem::path path_;
    mutable std::unique_ptr<PipedProcess> cat_file_;
    mutable std::unique_ptr<std::mutex> cat_file_mutex_;
};

/// Parses the output of the `git log` invocation used by GitRepository::scan.
std::vector<CommitRecord> parse_git_log(const std::string& output);

}  // namespace cochange::history
