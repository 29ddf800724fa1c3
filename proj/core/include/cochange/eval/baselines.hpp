#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cochange/eval/evaluate.hpp"

namespace cochange::eval {

/// Support ranking: co-change count descending, then id.
std::vector<std::size_t> rank_by_support(const dataset::RankingList& list);

/// Clone ranking: clone similarity descending, then id.
std::vector<std::size_t> rank_by_clone(const dataset::RankingList& list);

/// Edges between the directories of two '/'-separated file paths in the
/// directory tree.
int directory_distance(const std::string& file_a, const std::string& file_b);

/// File proximity ranking: directory distance ascending, the query's own
/// file before other files at distance 0, then support descending, then id.
/// `file_of` maps method ids to file paths; unknown ids rank last.
std::vector<std::size_t> rank_by_file_proximity(const dataset::RankingList& list,
                                                const std::unordered_map<MethodId, std::string>& file_of);

/// Top min(k, n) of a full ranking.
std::vector<std::size_t> top_k(std::vector<std::size_t> order, int k);

Ranker support_ranker();
Ranker clone_ranker();
/// Keeps a reference to `file_of`.
Ranker file_proximity_ranker(const std::unordered_map<MethodId, std::string>& file_of);

}  // namespace cochange::eval
