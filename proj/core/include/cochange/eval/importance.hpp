#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cochange/dataset/ranking_list.hpp"
#include "cochange/ltr/model.hpp"

namespace cochange::eval {

struct FeatureImportance {
    std::string feature;
    double importance = 0.0;  // baseline NDCG@k minus mean shuffled NDCG@k
};

struct ImportanceReport {
    int k = 5;
    double baseline_ndcg = 0.0;
    std::vector<FeatureImportance> per_feature;  // model feature order
    std::uint64_t shuffle_seed = 0;
    int repetitions = 5;
};

/// Mean NDCG@k of `model` after shuffling one feature column across every
/// candidate of every list, averaged over `repetitions` seeded shuffles,
/// subtracted from the unshuffled mean. Throws DataError for a feature the
/// model does not use.
double permutation_importance(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists,
                              const std::string& feature, std::uint64_t seed, int repetitions = 5, int k = 5,
                              unsigned jobs = 1);

/// Importance of every model feature.
ImportanceReport importance_report(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists,
                                   std::uint64_t seed, int repetitions = 5, int k = 5, unsigned jobs = 1);

}  // namespace cochange::eval
