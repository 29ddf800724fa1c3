#include "cochange/eval/importance.hpp"

#include <algorithm>
#include <numeric>

#include "cochange/common/error.hpp"
#include "cochange/common/parallel.hpp"
#include "cochange/common/rng.hpp"
#include "cochange/eval/metrics.hpp"

namespace cochange::eval {

namespace {

/// Model inputs for every candidate, row-major, with list boundaries.
struct Inputs {
    std::size_t width = 0;
    std::vector<double> values;
    std::vector<std::size_t> offsets;
};

Inputs gather(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists) {
    const auto columns = ltr::feature_columns(model.feature_names);
    Inputs in;
    in.width = columns.size();
    in.offsets.push_back(0);
    for (const auto& list : lists) {
        for (const auto& c : list.candidates) {
            const auto x = ltr::model_inputs(c.features, columns);
            in.values.insert(in.values.end(), x.begin(), x.end());
        }
        in.offsets.push_back(in.values.size() / std::max<std::size_t>(in.width, 1));
    }
    return in;
}

double mean_ndcg(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists, const Inputs& in, int k,
                 unsigned jobs) {
    std::vector<double> per_list(lists.size());
    parallel_for(lists.size(), jobs, [&](std::size_t l) {
        const auto& list = lists[l];
        std::vector<double> scores;
        std::vector<int> labels;
        for (std::size_t r = in.offsets[l]; r < in.offsets[l + 1]; ++r) {
            scores.push_back(model.predict({in.values.data() + r * in.width, in.width}));
        }
        for (const auto& c : list.candidates) labels.push_back(c.label);
        per_list[l] = ndcg_at_k(ltr::order_by_scores(list, scores), labels, k);
    });
    return std::accumulate(per_list.begin(), per_list.end(), 0.0) / static_cast<double>(per_list.size());
}

double shuffled_mean(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists, const Inputs& base,
                     std::size_t column, std::uint64_t seed, int repetitions, int k, unsigned jobs) {
    const std::size_t rows = base.offsets.back();
    std::vector<double> col(rows);
    for (std::size_t r = 0; r < rows; ++r) col[r] = base.values[r * base.width + column];
    Rng rng(seed);
    Inputs shuffled = base;
    double total = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
        std::vector<double> perm = col;
        rng.shuffle(std::span<double>(perm));
        for (std::size_t r = 0; r < rows; ++r) shuffled.values[r * base.width + column] = perm[r];
        total += mean_ndcg(model, lists, shuffled, k, jobs);
    }
    return total / static_cast<double>(repetitions);
}

std::uint64_t feature_seed(std::uint64_t seed, std::size_t column) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(column) + 1));
}

}  // namespace

double permutation_importance(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists,
                              const std::string& feature, std::uint64_t seed, int repetitions, int k, unsigned jobs) {
    auto it = std::find(model.feature_names.begin(), model.feature_names.end(), feature);
    if (it == model.feature_names.end()) throw DataError("feature '" + feature + "' is not in the model schema");
    if (repetitions < 1) throw DataError("repetitions must be at least 1");
    if (lists.empty()) throw DataError("cannot compute importance on an empty dataset");
    const auto column = static_cast<std::size_t>(it - model.feature_names.begin());
    const Inputs base = gather(model, lists);
    const double baseline = mean_ndcg(model, lists, base, k, jobs);
    return baseline - shuffled_mean(model, lists, base, column, feature_seed(seed, column), repetitions, k, jobs);
}

ImportanceReport importance_report(const ltr::TrainedModel& model, std::span<const dataset::RankingList> lists,
                                   std::uint64_t seed, int repetitions, int k, unsigned jobs) {
    if (repetitions < 1) throw DataError("repetitions must be at least 1");
    if (lists.empty()) throw DataError("cannot compute importance on an empty dataset");
    ImportanceReport report;
    report.k = k;
    report.shuffle_seed = seed;
    report.repetitions = repetitions;
    const Inputs base = gather(model, lists);
    report.baseline_ndcg = mean_ndcg(model, lists, base, k, jobs);
    for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
        const double shuffled = shuffled_mean(model, lists, base, f, feature_seed(seed, f), repetitions, k, jobs);
        report.per_feature.push_back(FeatureImportance{model.feature_names[f], report.baseline_ndcg - shuffled});
    }
    return report;
}

}  // namespace cochange::eval
