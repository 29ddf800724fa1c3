#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cochange/dataset/ranking_list.hpp"
#include "cochange/ltr/model.hpp"

namespace cochange::ltr {

struct ForestConfig {
    int num_trees = 100;
    int features_per_split = 0;  // 0 means floor(sqrt(feature count))
    int min_leaf = 1;
    double bag_fraction = 1.0;   // bootstrap sample size over row count, with replacement
};

struct MartConfig {
    int num_trees = 200;
    double learning_rate = 0.1;
    int max_leaves = 10;
    int min_leaf = 1;
};

struct CoordinateAscentConfig {
    int restarts = 5;
    double step_scale = 0.05;
    double tolerance = 1e-3;
    int max_sweeps = 25;
    int k = 10;
    int max_step_doublings = 10;
};

struct TrainConfig {
    ModelType model_type = ModelType::RandomForest;
    std::uint64_t rng_seed = 42;
    ForestConfig forest;
    MartConfig mart;
    CoordinateAscentConfig coordinate_ascent;
    TargetTransform target = TargetTransform::Raw;
    unsigned jobs = 1;

    /// Throws ConfigError for counts below 1 or a learning rate outside (0, 1].
    void validate() const;
};

/// Per restart: mean NDCG@k at the starting weights and after ascent.
struct CoordinateAscentTrace {
    std::vector<double> initial;
    std::vector<double> final;
    std::size_t best_restart = 0;
};

/// Rows of a dataset laid out for training. Row r belongs to list
/// list_of[r]; lists occupy contiguous row ranges in offsets.
struct TrainingMatrix {
    std::size_t features = 0;
    std::vector<double> values;  // row-major
    std::vector<int> labels;
    std::vector<std::size_t> offsets;  // lists.size() + 1 entries

    [[nodiscard]] std::size_t rows() const noexcept { return labels.size(); }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {values.data() + r * features, features}; }
};

TrainingMatrix make_training_matrix(std::span<const dataset::RankingList> lists,
                                    const std::vector<std::string>& feature_names);

/// Trains on every candidate row. Deterministic given config.rng_seed,
/// independent of config.jobs. Throws DataError for an empty dataset and
/// SchemaError for unknown feature names.
TrainedModel train(std::span<const dataset::RankingList> lists, const std::vector<std::string>& feature_names,
                   const TrainConfig& config, CoordinateAscentTrace* trace = nullptr);

/// CART regression tree on rows weighted by `weights` (bootstrap counts;
/// zero excludes a row). Splits maximize variance reduction over
/// thresholds at observed values; `features_per_split` of 0 considers every
/// feature. Growth is best-first; max_leaves of 0 means unlimited.
RegressionTree fit_regression_tree(const TrainingMatrix& data, std::span<const double> targets,
                                   std::span<const double> weights, int features_per_split, int min_leaf,
                                   int max_leaves, std::uint64_t seed);

}  // namespace cochange::ltr
