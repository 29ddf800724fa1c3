#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cochange/dataset/ranking_list.hpp"

namespace cochange::dataset {

/// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. nullopt when either side has zero
/// rank variance. Throws DataError for unequal lengths or fewer than 3
/// observations.
std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y);

struct DroppedFeature {
    std::string name;
    std::string correlated_with;
    double rho = 0.0;
};

/// Which features a model trains on, plus the evidence for each drop.
struct FeatureSchema {
    std::vector<std::string> features;  // kept, canonical order
    std::vector<DroppedFeature> dropped;
    double threshold = 0.7;
    std::vector<std::string> all_features;                    // rows/cols of `correlation`
    std::vector<std::vector<std::optional<double>>> correlation;  // nullopt = not computable

    [[nodiscard]] std::vector<std::size_t> indices() const;  // into the canonical feature order
};

/// Victim table: for a pair {a, b}, which one to drop. Pairs not listed
/// drop the later feature in canonical order.
using VictimTable = std::map<std::pair<std::string, std::string>, std::string>;
const VictimTable& default_victims();

/// Computes Spearman's rho between every pair of features over all
/// candidate rows, then walks pairs by descending |rho| and drops one side
/// of each pair above `threshold` whose members are both still kept.
/// Throws DataError for an empty dataset.
FeatureSchema prune_correlated_features(std::span<const RankingList> dataset, double threshold = 0.7,
                                        const VictimTable& victims = default_victims());

/// The full canonical schema without pruning.
FeatureSchema full_schema();

}  // namespace cochange::dataset
