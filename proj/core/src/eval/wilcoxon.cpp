#include "cochange/eval/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cochange/common/error.hpp"

namespace cochange::eval {

std::string to_string(SignificanceMethod m) {
    return m == SignificanceMethod::Exact ? "exact" : "normal-approximation";
}

namespace {

/// P(W+ <= w) under random signs, with ranks doubled so ties stay integral.
double exact_lower_tail(const std::vector<int>& doubled_ranks, int doubled_w) {
    const int total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0);
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    int reach = 0;
    for (int r : doubled_ranks) {
        for (int s = reach; s >= 0; --s) {
            if (ways[static_cast<std::size_t>(s)] != 0.0) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
        }
        reach += r;
    }
    double below = 0.0;
    for (int s = 0; s <= std::min(doubled_w, total); ++s) below += ways[static_cast<std::size_t>(s)];
    return below / std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
}

}  // namespace

SignificanceResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("wilcoxon_signed_rank: samples differ in length");
    if (a.empty()) throw DataError("wilcoxon_signed_rank: empty samples");

    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] - b[i];
        if (x != 0.0) d.push_back(x);
    }
    SignificanceResult r;
    r.n_effective = static_cast<int>(d.size());
    if (d.empty()) return r;

    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });
    std::vector<int> doubled(d.size());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
        const int twice_rank = static_cast<int>(i + j + 2);  // 2 * average of 1-based ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) doubled[order[k]] = twice_rank;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    int doubled_plus = 0;
    int doubled_minus = 0;
    for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? doubled_plus : doubled_minus) += doubled[i];
    r.w_plus = doubled_plus / 2.0;
    r.w_minus = doubled_minus / 2.0;
    r.statistic = std::min(r.w_plus, r.w_minus);

    const double n = static_cast<double>(d.size());
    if (r.n_effective <= kExactWilcoxonLimit) {
        r.method = SignificanceMethod::Exact;
        r.p_value = std::min(1.0, 2.0 * exact_lower_tail(doubled, std::min(doubled_plus, doubled_minus)));
    } else {
        r.method = SignificanceMethod::NormalApproximation;
        const double mean = n * (n + 1.0) / 4.0;
        const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        if (var <= 0.0) {
            r.p_value = 1.0;
        } else {
            double diff = r.statistic - mean;
            if (diff != 0.0) diff -= std::copysign(0.5, diff);
            const double z = diff / std::sqrt(var);
            r.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
        }
    }
    return r;
}

}  // namespace cochange::eval
