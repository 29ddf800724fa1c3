#include "cochange/history/git_repository.hpp"

#include <algorithm>
#include <set>

#include "cochange/common/text.hpp"
#include "cochange/history/subprocess.hpp"

namespace cochange::history {

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

std::vector<std::string> git_argv(const std::filesystem::path& repo, const std::vector<std::string>& args) {
    std::vector<std::string> argv{"git", "-C", repo.string(), "-c", "core.quotePath=false"};
    argv.insert(argv.end(), args.begin(), args.end());
    return argv;
}

std::vector<FileChange> parse_name_status(const std::vector<std::string>& lines) {
    std::vector<FileChange> out;
    for (const auto& line : lines) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (;;) {
            const std::size_t tab = line.find('\t', start);
            parts.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (parts.size() < 2 || parts[0].empty()) continue;
        FileChange change;
        change.status = parts[0][0];
        if ((change.status == 'R' || change.status == 'C') && parts.size() >= 3) {
            change.old_path = parts[1];
            change.path = parts[2];
        } else {
            change.path = parts[1];
        }
        out.push_back(std::move(change));
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

}  // namespace

std::vector<CommitRecord> parse_git_log(const std::string& output) {
    std::vector<CommitRecord> commits;
    std::size_t start = 0;
    while (start < output.size()) {
        std::size_t end = output.find(kRecordSep, start + 1);
        if (end == std::string::npos) end = output.size();
        std::string_view chunk(output.data() + start, end - start);
        start = end;
        if (!chunk.empty() && chunk.front() == kRecordSep) chunk.remove_prefix(1);
        if (chunk.find_first_not_of("\n") == std::string_view::npos) continue;

        auto lines = split_lines(chunk);
        const std::string& header = lines.front();
        std::vector<std::string> fields;
        std::size_t fstart = 0;
        for (;;) {
            const std::size_t sep = header.find(kFieldSep, fstart);
            fields.push_back(header.substr(fstart, sep == std::string::npos ? std::string::npos : sep - fstart));
            if (sep == std::string::npos) break;
            fstart = sep + 1;
        }
        if (fields.size() != 4) throw GitError("unexpected git log record: " + header);
        CommitRecord c;
        c.sha = fields[0];
        c.author = to_lower(fields[1]);
        c.timestamp = from_unix_seconds(std::stoll(fields[2]));
        c.parent_shas = split_nonempty(fields[3], ' ');
        c.changes = parse_name_status(std::vector<std::string>(lines.begin() + 1, lines.end()));
        std::set<std::string> files;
        for (const auto& ch : c.changes) {
            files.insert(ch.path);
            if (!ch.old_path.empty()) files.insert(ch.old_path);
        }
        c.changed_files.assign(files.begin(), files.end());
        commits.push_back(std::move(c));
    }
    return commits;
}

GitRepository::GitRepository(std::filesystem::path path)
    : path_(std::move(path)), cat_file_mutex_(std::make_unique<std::mutex>()) {}

GitRepository::GitRepository(GitRepository&&) noexcept = default;
GitRepository& GitRepository::operator=(GitRepository&&) noexcept = default;
GitRepository::~GitRepository() = default;

GitRepository GitRepository::open(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec)) {
        throw NotARepositoryError("not a git repository: " + path.string() + " (no such directory)");
    }
    const ProcessResult r = run_process(git_argv(path, {"rev-parse", "--git-dir"}));
    if (r.exit_code != 0) {
        throw NotARepositoryError("not a git repository: " + path.string() + ": " + trim(r.err));
    }
    return GitRepository(path);
}

std::string GitRepository::git(const std::vector<std::string>& args) const {
    const ProcessResult r = run_process(git_argv(path_, args));
    if (r.exit_code != 0) {
        std::string cmd = "git";
        for (const auto& a : args) cmd += " " + a;
        throw GitError(cmd + " failed in " + path_.string() + ": " + trim(r.err));
    }
    return r.out;
}

std::optional<std::string> GitRepository::head() const {
    const ProcessResult r = run_process(git_argv(path_, {"rev-parse", "--verify", "-q", "HEAD^{commit}"}));
    if (r.exit_code != 0) return std::nullopt;
    return trim(r.out);
}

std::vector<CommitRecord> GitRepository::scan(Instant until) const {
    if (!head()) return {};
    const std::string out = git({"log", "--topo-order", "--reverse", "--root", "-M", "--name-status",
                                 "--diff-merges=first-parent", "--format=%x1e%H%x1f%ae%x1f%ct%x1f%P", "HEAD"});
    std::vector<CommitRecord> commits = parse_git_log(out);
    std::erase_if(commits, [&](const CommitRecord& c) { return c.timestamp > until; });
    return commits;
}

std::vector<FileChange> GitRepository::diff_files(const std::string& from, const std::string& to) const {
    const std::string out = git({"diff", "--name-status", "-M", "--no-ext-diff", from, to});
    return parse_name_status(split_lines(out));
}

std::optional<std::string> GitRepository::read_file(const std::string& revision, const std::string& path) const {
    std::lock_guard lock(*cat_file_mutex_);
    if (!cat_file_) cat_file_ = std::make_unique<PipedProcess>(git_argv(path_, {"cat-file", "--batch"}));
    cat_file_->write(revision + ":" + path + "\n");
    const std::string header = cat_file_->read_line();
    if (ends_with(header, " missing") || ends_with(header, " ambiguous")) return std::nullopt;
    // "<oid> <type> <size>"
    const std::size_t last_space = header.rfind(' ');
    const std::size_t type_space = header.find(' ');
    if (last_space == std::string::npos || type_space == last_space) {
        throw GitError("unexpected cat-file header: " + header);
    }
    const std::size_t size = std::stoull(header.substr(last_space + 1));
    std::string content = cat_file_->read_exact(size);
    cat_file_->read_exact(1);  // trailing newline
    if (header.substr(type_space + 1, last_space - type_space - 1) != "blob") return std::nullopt;
    return content;
}

std::vector<std::string> GitRepository::list_files(const std::string& revision) const {
    auto lines = split_lines(git({"ls-tree", "-r", "--name-only", revision}));
    std::erase_if(lines, [](const std::string& l) { return l.empty(); });
    return lines;
}

}  // namespace cochange::history
