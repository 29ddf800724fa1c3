#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cochange/analysis/embedding.hpp"
#include "cochange/analysis/method_record.hpp"
#include "cochange/common/error.hpp"
#include "cochange/dataset/ranking_list.hpp"
#include "cochange/history/change_set.hpp"
#include "cochange/history/edit_history.hpp"

namespace cochange::dataset {

struct BuildOptions {
    /// Keep only candidates that share a feature-period change set, a
    /// directory, or a call edge with the query. Off by default.
    bool blocking = false;
    unsigned jobs = 1;
    const analysis::ExternalEmbeddings* embeddings = nullptr;
};

struct BuildReport {
    std::size_t snapshot_methods = 0;
    std::size_t test_methods = 0;
    std::size_t methods_without_history = 0;
    std::size_t valid_methods = 0;
    std::size_t lists_all_zero = 0;
    std::size_t lists_emitted = 0;
    std::string note;  // set when nothing could be emitted
};

/// Builds one ranking list per valid query. A method is valid when it is
/// not a test method and has at least one edit in the feature period.
/// Candidates are every other valid method in ascending id order; features
/// come from the feature period and labels count label-period co-changes.
/// Lists whose labels are all zero are dropped. `methods` is the snapshot at
/// t_d. Output is sorted by query id regardless of input order.
std::vector<RankingList> build_dataset(std::span<const analysis::MethodRecord> methods,
                                       const history::EditHistories& histories,
                                       std::span<const history::ChangeSet> change_sets, const WindowConfig& window,
                                       const BuildOptions& options = {}, BuildReport* report = nullptr);

class HistoryTooShortError : public DataError {
public:
    using DataError::DataError;
};

struct SplitWindows {
    WindowConfig train;
    WindowConfig test;
};

/// Train: t_d = T - (train + test days), t_e = T - test days.
/// Test: t_d = T - test days, t_e = T. Both start at `first_commit`.
/// Throws HistoryTooShortError when the train t_d is not after t_s, and
/// ConfigError for non-positive day counts.
SplitWindows split_windows(Instant first_commit, Instant last_commit, int train_label_days = 180,
                           int test_label_days = 180);

struct DatasetSplit {
    std::vector<RankingList> train;
    std::vector<RankingList> test;
    WindowConfig train_window;
    WindowConfig test_window;
};

}  // namespace cochange::dataset
