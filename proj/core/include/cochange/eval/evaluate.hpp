#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cochange/common/method_id.hpp"
#include "cochange/dataset/ranking_list.hpp"
#include "cochange/ltr/model.hpp"

namespace cochange::eval {

/// Returns candidate indices, best first. May return fewer than all.
using Ranker = std::function<std::vector<std::size_t>(const dataset::RankingList&)>;

Ranker model_ranker(const ltr::TrainedModel& model);
/// Ranks by label, then id: the ideal ordering.
Ranker oracle_ranker();

inline const std::vector<int>& default_k_values() {
    static const std::vector<int> ks{1, 3, 5, 10};
    return ks;
}

struct QueryResult {
    MethodId query;
    std::map<int, double> ndcg;  // k -> NDCG@k
};

struct Summary {
    double mean = 0.0;
    double median = 0.0;
};

struct EvalReport {
    std::string ranker;
    std::vector<int> k_values;
    std::vector<QueryResult> per_query;  // ascending query id
    std::map<int, Summary> per_project;
    bool gain_capped = false;  // some label exceeded the gain exponent cap

    /// NDCG@k per query, aligned with per_query.
    [[nodiscard]] std::vector<double> column(int k) const;
};

double median_of(std::vector<double> values);

/// Scores every list with `ranker`. Throws DataError for an empty dataset,
/// k < 1, or a list without a positive label.
EvalReport evaluate(const Ranker& ranker, std::span<const dataset::RankingList> lists,
                    const std::vector<int>& k_values = default_k_values(), const std::string& name = "",
                    unsigned jobs = 1);

/// Mean and median of several per-project means, per k.
std::map<int, Summary> aggregate_projects(std::span<const EvalReport> reports);

}  // namespace cochange::eval
