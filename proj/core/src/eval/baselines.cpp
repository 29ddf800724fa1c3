#include "cochange/eval/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "cochange/common/error.hpp"
#include "cochange/common/text.hpp"

namespace cochange::eval {

namespace {

template <typename Key>
std::vector<std::size_t> sorted_by(const dataset::RankingList& list, Key key) {
    std::vector<std::size_t> order(list.candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ka = key(list.candidates[a]);
        const auto kb = key(list.candidates[b]);
        if (ka != kb) return ka < kb;
        return list.candidates[a].id < list.candidates[b].id;
    });
    return order;
}

std::vector<std::string> directories_of(const std::string& file) {
    auto parts = split_nonempty(file, '/');
    if (!parts.empty()) parts.pop_back();
    return parts;
}

}  // namespace

std::vector<std::size_t> rank_by_support(const dataset::RankingList& list) {
    return sorted_by(list, [](const dataset::Candidate& c) { return -c.features.co_change_count; });
}

std::vector<std::size_t> rank_by_clone(const dataset::RankingList& list) {
    return sorted_by(list, [](const dataset::Candidate& c) { return -c.features.clone_similarity; });
}

int directory_distance(const std::string& file_a, const std::string& file_b) {
    const auto a = directories_of(file_a);
    const auto b = directories_of(file_b);
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    return static_cast<int>((a.size() - common) + (b.size() - common));
}

std::vector<std::size_t> rank_by_file_proximity(const dataset::RankingList& list,
                                                const std::unordered_map<MethodId, std::string>& file_of) {
    auto q = file_of.find(list.query);
    if (q == file_of.end()) throw DataError("no file path for query " + list.query.value);
    const std::string& query_file = q->second;
    return sorted_by(list, [&](const dataset::Candidate& c) {
        auto it = file_of.find(c.id);
        if (it == file_of.end()) return std::make_tuple(std::numeric_limits<int>::max(), 1, -c.features.co_change_count);
        return std::make_tuple(directory_distance(query_file, it->second), it->second == query_file ? 0 : 1,
                               -c.features.co_change_count);
    });
}

std::vector<std::size_t> top_k(std::vector<std::size_t> order, int k) {
    if (k < 1) throw DataError("k must be at least 1");
    order.resize(std::min(order.size(), static_cast<std::size_t>(k)));
    return order;
}

Ranker support_ranker() { return [](const dataset::RankingList& l) { return rank_by_support(l); }; }

Ranker clone_ranker() { return [](const dataset::RankingList& l) { return rank_by_clone(l); }; }

Ranker file_proximity_ranker(const std::unordered_map<MethodId, std::string>& file_of) {
    return [&file_of](const dataset::RankingList& l) { return rank_by_file_proximity(l, file_of); };
}

}  // namespace cochange::eval
