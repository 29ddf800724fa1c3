#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cochange/analysis/method_record.hpp"
#include "cochange/common/time.hpp"
#include "cochange/dataset/ranking_list.hpp"
#include "cochange/history/change_set.hpp"
#include "cochange/history/edit_history.hpp"

namespace cochange::tests {

/// Directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Exit status and captured output of a command run through the shell.
struct CommandResult {
    int status = -1;
    std::string out;
    std::string err;
};
CommandResult run_command(const std::vector<std::string>& argv);

/// A clone of the committed fixture bundle, made once per process.
const std::filesystem::path& fixture_repo();

/// Full sha of a tag in the fixture (c1..c15, m1..m3).
std::string fixture_sha(const std::string& tag);

/// Path of the cochange executable under test.
std::filesystem::path cochange_executable();

Instant at(const std::string& iso);

/// A method record with the identity fields filled in and a matching id.
analysis::MethodRecord make_method(const std::string& file_path, const std::string& type_name,
                                   const std::string& name, std::vector<analysis::Parameter> params = {},
                                   const std::string& body = "");

/// Shorthand for a ranking list whose candidates are named c0, c1, ... and
/// carry `labels` and, optionally, co-change counts.
dataset::RankingList make_list(const std::string& query, const std::vector<int>& labels,
                               const std::vector<int>& co_change = {});

/// Synthetic project with a known coupling structure. Each cluster of
/// methods keeps changing together and its members call one another; a
/// cluster spans two types, which may sit in different packages. Random
/// bulk edits, cross-cluster calls and solo edits add noise. Methods added
/// late have little joint history with their cluster.
struct PlantedProject {
    std::vector<analysis::MethodRecord> methods;
    std::vector<history::ChangeSet> change_sets;
    history::EditHistories histories;
    Instant t_s{};
    Instant last{};
    std::map<MethodId, int> cluster_of;
};

struct PlantedOptions {
    int clusters = 50;
    int methods_per_cluster = 4;
    int types = 30;
    int packages = 8;
    int days = 900;
    double coupling_interval_days = 35;  // mean gap between a cluster's joint edits
    double min_participation = 0.5;
    double bulk_edits_per_day = 0.01;
    double chain_call_rate = 0.8;
    double stranger_call_rate = 0.15;
    double late_fraction = 0.6;  // methods added at a random time instead of at the start
    std::uint64_t seed = 7;
};

PlantedProject make_planted_project(const PlantedOptions& options = {});

}  // namespace cochange::tests
