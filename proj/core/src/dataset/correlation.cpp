#include "cochange/dataset/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "cochange/common/error.hpp"

namespace cochange::dataset {

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

std::optional<double> pearson(std::span<const double> rx, std::span<const double> ry) {
    const double n = static_cast<double>(rx.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("spearman_correlation: length mismatch");
    if (x.size() < 3) throw DataError("spearman_correlation: need at least 3 observations");
    return pearson(average_ranks(x), average_ranks(y));
}

std::vector<std::size_t> FeatureSchema::indices() const {
    std::vector<std::size_t> out;
    for (const auto& name : features) {
        auto i = feature_index(name);
        if (!i) throw SchemaError("unknown feature '" + name + "'");
        out.push_back(*i);
    }
    return out;
}

const VictimTable& default_victims() {
    static const VictimTable table{
        {{"path_similarity", "package_similarity"}, "package_similarity"},
    };
    return table;
}

FeatureSchema full_schema() {
    FeatureSchema s;
    s.features.assign(feature_names().begin(), feature_names().end());
    s.all_features = s.features;
    return s;
}

FeatureSchema prune_correlated_features(std::span<const RankingList> dataset, double threshold,
                                        const VictimTable& victims) {
    std::vector<std::array<double, kFeatureCount>> rows;
    for (const auto& list : dataset) {
        for (const auto& c : list.candidates) rows.push_back(c.features.to_array());
    }
    if (rows.empty()) throw DataError("cannot prune features of an empty dataset");

    FeatureSchema schema = full_schema();
    schema.threshold = threshold;
    schema.correlation.assign(kFeatureCount, std::vector<std::optional<double>>(kFeatureCount));

    std::vector<std::vector<double>> ranks(kFeatureCount, std::vector<double>(rows.size()));
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t r = 0; r < rows.size(); ++r) ranks[f][r] = rows[r][f];
        ranks[f] = average_ranks(ranks[f]);
    }

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        for (std::size_t b = a; b < kFeatureCount; ++b) {
            std::optional<double> rho;
            if (rows.size() >= 3) rho = pearson(ranks[a], ranks[b]);
            schema.correlation[a][b] = rho;
            schema.correlation[b][a] = rho;
            if (a != b && rho) pairs.emplace_back(std::abs(*rho), a, b);
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });

    const auto& names = feature_names();
    std::vector<bool> dropped(kFeatureCount, false);
    for (const auto& [abs_rho, a, b] : pairs) {
        if (!(abs_rho > threshold)) break;
        if (dropped[a] || dropped[b]) continue;
        std::size_t victim = b;
        auto it = victims.find({names[a], names[b]});
        if (it == victims.end()) it = victims.find({names[b], names[a]});
        if (it != victims.end()) victim = it->second == names[a] ? a : b;
        const std::size_t keeper = victim == a ? b : a;
        dropped[victim] = true;
        schema.dropped.push_back(DroppedFeature{names[victim], names[keeper], *schema.correlation[a][b]});
    }

    schema.features.clear();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (!dropped[f]) schema.features.push_back(names[f]);
    }
    return schema;
}

}  // namespace cochange::dataset
