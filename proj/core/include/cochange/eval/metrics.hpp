#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cochange::eval {

/// Gains use 2^min(rel, 30) - 1.
inline constexpr int kMaxGainExponent = 30;

struct DcgResult {
    double value = 0.0;
    bool capped = false;  // some relevance exceeded kMaxGainExponent
};

/// sum_{i=1..min(k,n)} (2^rel_i - 1) / log2(i + 1). Throws DataError for
/// k < 1 or a negative relevance.
DcgResult dcg_at_k_detailed(std::span<const int> relevances_in_ranked_order, int k);
double dcg_at_k(std::span<const int> relevances_in_ranked_order, int k);

/// DCG@k of `labels` taken in `order` over DCG@k of the label-descending
/// order. `order` holds indices into `labels` and may be a prefix of a
/// full ranking. Throws DataError when every label is zero.
double ndcg_at_k(std::span<const std::size_t> order, std::span<const int> labels, int k);

/// Ideal DCG@k; 0 for all-zero labels.
double ideal_dcg_at_k(std::span<const int> labels, int k);

}  // namespace cochange::eval
