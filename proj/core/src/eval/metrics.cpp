#include "cochange/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cochange/common/error.hpp"

namespace cochange::eval {

namespace {

double gain(int rel, bool& capped) {
    if (rel < 0) throw DataError("negative relevance " + std::to_string(rel));
    if (rel > kMaxGainExponent) {
        capped = true;
        rel = kMaxGainExponent;
    }
    return std::ldexp(1.0, rel) - 1.0;
}

}  // namespace

DcgResult dcg_at_k_detailed(std::span<const int> rel, int k) {
    if (k < 1) throw DataError("k must be at least 1");
    DcgResult r;
    const std::size_t n = std::min(rel.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        r.value += gain(rel[i], r.capped) / std::log2(static_cast<double>(i) + 2.0);
    }
    return r;
}

double dcg_at_k(std::span<const int> rel, int k) { return dcg_at_k_detailed(rel, k).value; }

double ideal_dcg_at_k(std::span<const int> labels, int k) {
    std::vector<int> sorted(labels.begin(), labels.end());
    const std::size_t top = std::min(sorted.size(), static_cast<std::size_t>(std::max(k, 1)));
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(top), sorted.end(),
                      std::greater<>());
    sorted.resize(top);
    return dcg_at_k(sorted, k);
}

double ndcg_at_k(std::span<const std::size_t> order, std::span<const int> labels, int k) {
    const double ideal = ideal_dcg_at_k(labels, k);
    if (ideal <= 0.0) throw DataError("NDCG is undefined when every label is zero");
    std::vector<int> ranked;
    const std::size_t n = std::min(order.size(), static_cast<std::size_t>(k));
    ranked.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= labels.size()) throw DataError("ranking index out of range");
        ranked.push_back(labels[order[i]]);
    }
    return std::min(1.0, dcg_at_k(ranked, k) / ideal);
}

}  // namespace cochange::eval
