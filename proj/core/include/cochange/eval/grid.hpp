#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cochange/dataset/builder.hpp"
#include "cochange/eval/evaluate.hpp"
#include "cochange/eval/wilcoxon.hpp"
#include "cochange/ltr/train.hpp"

namespace cochange::eval {

struct GridSettings {
    std::vector<int> train_days{30, 90, 180};
    std::vector<int> test_days{5, 10, 20, 30, 60, 90, 120, 150, 180, 270};
    std::vector<int> k_values{1, 3, 5, 10};
    int compare_k = 5;  // NDCG@k used for the pairwise tests
    unsigned jobs = 1;
};

struct GridCell {
    int train_days = 0;
    int test_days = 0;
    bool skipped = false;
    std::string reason;  // why the cell was skipped
    std::size_t train_lists = 0;
    std::size_t test_lists = 0;
    std::optional<EvalReport> report;
};

/// Training-period settings compared over the queries both evaluated,
/// paired by (test days, query).
struct GridComparison {
    int train_days_a = 0;
    int train_days_b = 0;
    std::size_t paired_queries = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    std::optional<SignificanceResult> test;  // absent without paired queries
};

struct GridResult {
    std::vector<GridCell> cells;  // train-major order
    std::vector<GridComparison> comparisons;
    int compare_k = 5;
};

/// Builds the split for one cell. Throws dataset::HistoryTooShortError when
/// the history cannot cover the requested periods.
using SplitProvider = std::function<dataset::DatasetSplit(int train_days, int test_days)>;

/// Chooses the training features from the training lists.
using FeatureSelector = std::function<std::vector<std::string>(std::span<const dataset::RankingList>)>;

/// Pruned-schema selection at the default threshold.
FeatureSelector default_feature_selector();

/// Attempts every (train, test) cell. Infeasible cells and cells with no
/// training or test lists are marked skipped with a reason and no scores.
GridResult window_experiment(const SplitProvider& provider, const ltr::TrainConfig& config,
                             const GridSettings& settings = {},
                             const FeatureSelector& select = default_feature_selector());

}  // namespace cochange::eval
