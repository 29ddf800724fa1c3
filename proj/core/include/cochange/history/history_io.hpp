#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cochange/history/change_set.hpp"
#include "cochange/history/commit.hpp"
#include "cochange/history/edit_history.hpp"

namespace cochange::history {

/// changesets.jsonl: {"cs_id", "merged_at", "commits", "source", "methods"}
void write_change_sets_jsonl(std::ostream& out, std::span<const ChangeSet> change_sets);
std::vector<ChangeSet> read_change_sets_jsonl(std::istream& in, const std::string& origin = "<stream>");

/// histories.jsonl: {"method_id", "events": [{"cs_id","commit","author","timestamp"}...]}
void write_histories_jsonl(std::ostream& out, const EditHistories& histories);
EditHistories read_histories_jsonl(std::istream& in, const std::string& origin = "<stream>");

/// commits.jsonl: {"sha", "author", "timestamp", "parents", "changed_files", "changes": [{"status","path","old_path"}]}
void write_commits_jsonl(std::ostream& out, std::span<const CommitRecord> commits);
std::vector<CommitRecord> read_commits_jsonl(std::istream& in, const std::string& origin = "<stream>");

/// Offline mapping file: {"cs_id", "commits": [sha...]} per line.
void write_mapping_jsonl(std::ostream& out, const PullRequestMapping& mapping);
PullRequestMapping read_mapping_jsonl(std::istream& in, const std::string& origin = "<stream>");

}  // namespace cochange::history
