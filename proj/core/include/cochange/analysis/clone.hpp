#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

/// Scores below this (dissimilarity above 0.3) are reported as 0, the way a
/// near-miss clone detector only emits clone pairs.
inline constexpr double kCloneReportThreshold = 70.0;

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// 100 * LCS / max(len) over pretty-printed normalized lines, clamped to 0
/// below kCloneReportThreshold. Empty inputs score 0.
double clone_similarity_of_lines(std::span<const std::string> a, std::span<const std::string> b);

double clone_similarity(const MethodRecord& a, const MethodRecord& b);

/// Precomputed normalized lines for a method set, interned to integers so
/// that pairwise scoring avoids string comparisons.
class CloneIndex {
public:
    CloneIndex() = default;
    explicit CloneIndex(std::span<const MethodRecord> methods);

    /// Same result as clone_similarity on the two records.
    [[nodiscard]] double similarity(const MethodId& a, const MethodId& b) const;

private:
    std::unordered_map<MethodId, std::vector<std::uint32_t>> lines_;
};

}  // namespace cochange::analysis
