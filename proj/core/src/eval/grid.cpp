#include "cochange/eval/grid.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cochange/dataset/correlation.hpp"

namespace cochange::eval {

FeatureSelector default_feature_selector() {
    return [](std::span<const dataset::RankingList> lists) {
        return dataset::prune_correlated_features(lists).features;
    };
}

GridResult window_experiment(const SplitProvider& provider, const ltr::TrainConfig& config,
                             const GridSettings& settings, const FeatureSelector& select) {
    GridResult result;
    result.compare_k = settings.compare_k;
    std::vector<int> ks = settings.k_values;
    if (std::find(ks.begin(), ks.end(), settings.compare_k) == ks.end()) ks.push_back(settings.compare_k);

    for (int train_days : settings.train_days) {
        for (int test_days : settings.test_days) {
            GridCell cell;
            cell.train_days = train_days;
            cell.test_days = test_days;
            try {
                const auto split = provider(train_days, test_days);
                cell.train_lists = split.train.size();
                cell.test_lists = split.test.size();
                if (split.train.empty()) {
                    cell.skipped = true;
                    cell.reason = "no training data";
                } else if (split.test.empty()) {
                    cell.skipped = true;
                    cell.reason = "no test data";
                } else {
                    const auto model = ltr::train(split.train, select(split.train), config);
                    cell.report = evaluate(model_ranker(model), split.test, ks, ltr::to_string(config.model_type),
                                           settings.jobs);
                }
            } catch (const dataset::HistoryTooShortError& e) {
                cell.skipped = true;
                cell.reason = e.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }

    // (test days, query) -> NDCG, per training setting
    std::map<int, std::map<std::pair<int, MethodId>, double>> scores;
    for (const auto& cell : result.cells) {
        if (!cell.report) continue;
        for (const auto& q : cell.report->per_query) {
            scores[cell.train_days][{cell.test_days, q.query}] = q.ndcg.at(settings.compare_k);
        }
    }
    for (std::size_t i = 0; i < settings.train_days.size(); ++i) {
        for (std::size_t j = i + 1; j < settings.train_days.size(); ++j) {
            GridComparison cmp;
            cmp.train_days_a = settings.train_days[i];
            cmp.train_days_b = settings.train_days[j];
            std::vector<double> a;
            std::vector<double> b;
            const auto& sa = scores[cmp.train_days_a];
            const auto& sb = scores[cmp.train_days_b];
            for (const auto& [key, value] : sa) {
                auto it = sb.find(key);
                if (it == sb.end()) continue;
                a.push_back(value);
                b.push_back(it->second);
            }
            cmp.paired_queries = a.size();
            if (!a.empty()) {
                cmp.mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
                cmp.mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
                cmp.test = wilcoxon_signed_rank(a, b);
            }
            result.comparisons.push_back(cmp);
        }
    }
    return result;
}

}  // namespace cochange::eval
