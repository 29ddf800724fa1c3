#include "cochange/eval/evaluate.hpp"

#include <algorithm>
#include <numeric>

#include "cochange/common/error.hpp"
#include "cochange/common/parallel.hpp"
#include "cochange/eval/metrics.hpp"

namespace cochange::eval {

Ranker model_ranker(const ltr::TrainedModel& model) {
    return [&model](const dataset::RankingList& list) {
        const auto scores = ltr::predict_scores(model, list);
        return ltr::order_by_scores(list, scores);
    };
}

Ranker oracle_ranker() {
    return [](const dataset::RankingList& list) {
        std::vector<double> scores;
        for (const auto& c : list.candidates) scores.push_back(c.label);
        return ltr::order_by_scores(list, scores);
    };
}

std::vector<double> EvalReport::column(int k) const {
    std::vector<double> out;
    out.reserve(per_query.size());
    for (const auto& q : per_query) out.push_back(q.ndcg.at(k));
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

EvalReport evaluate(const Ranker& ranker, std::span<const dataset::RankingList> lists,
                    const std::vector<int>& k_values, const std::string& name, unsigned jobs) {
    if (lists.empty()) throw DataError("cannot evaluate an empty dataset");
    if (k_values.empty()) throw DataError("no k values to evaluate");
    for (int k : k_values) {
        if (k < 1) throw DataError("k must be at least 1");
    }
    EvalReport report;
    report.ranker = name;
    report.k_values = k_values;
    std::sort(report.k_values.begin(), report.k_values.end());
    report.k_values.erase(std::unique(report.k_values.begin(), report.k_values.end()), report.k_values.end());

    std::vector<std::size_t> by_query(lists.size());
    std::iota(by_query.begin(), by_query.end(), std::size_t{0});
    std::sort(by_query.begin(), by_query.end(),
              [&](std::size_t a, std::size_t b) { return lists[a].query < lists[b].query; });

    report.per_query.resize(lists.size());
    std::vector<char> capped(lists.size(), 0);
    parallel_for(lists.size(), jobs, [&](std::size_t i) {
        const auto& list = lists[by_query[i]];
        std::vector<int> labels;
        labels.reserve(list.candidates.size());
        for (const auto& c : list.candidates) labels.push_back(c.label);
        const auto order = ranker(list);
        QueryResult q;
        q.query = list.query;
        for (int k : report.k_values) q.ndcg[k] = ndcg_at_k(order, labels, k);
        capped[i] = std::any_of(labels.begin(), labels.end(), [](int l) { return l > kMaxGainExponent; });
        report.per_query[i] = std::move(q);
    });
    report.gain_capped = std::any_of(capped.begin(), capped.end(), [](char c) { return c != 0; });

    for (int k : report.k_values) {
        const auto values = report.column(k);
        Summary s;
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        s.median = median_of(values);
        report.per_project[k] = s;
    }
    return report;
}

std::map<int, Summary> aggregate_projects(std::span<const EvalReport> reports) {
    std::map<int, std::vector<double>> means;
    for (const auto& r : reports) {
        for (const auto& [k, s] : r.per_project) means[k].push_back(s.mean);
    }
    std::map<int, Summary> out;
    for (auto& [k, v] : means) {
        out[k] = Summary{std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()), median_of(v)};
    }
    return out;
}

}  // namespace cochange::eval
