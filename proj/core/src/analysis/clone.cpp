#include "cochange/analysis/clone.hpp"

#include <algorithm>

#include "cochange/analysis/normalize.hpp"

namespace cochange::analysis {

namespace {

template <typename T>
std::size_t lcs_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (const T& x : a) {
        std::size_t diag = 0;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
            diag = up;
        }
    }
    return row[b.size()];
}

double score(std::size_t lcs, std::size_t la, std::size_t lb) {
    const std::size_t longest = std::max(la, lb);
    if (longest == 0) return 0.0;
    const double s = 100.0 * static_cast<double>(lcs) / static_cast<double>(longest);
    return s < kCloneReportThreshold ? 0.0 : s;
}

}  // namespace

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    return lcs_impl(a, b);
}

double clone_similarity_of_lines(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0.0;
    return score(lcs_length(a, b), a.size(), b.size());
}

double clone_similarity(const MethodRecord& a, const MethodRecord& b) {
    const auto la = clone_lines(a.body_source);
    const auto lb = clone_lines(b.body_source);
    return clone_similarity_of_lines(la, lb);
}

CloneIndex::CloneIndex(std::span<const MethodRecord> methods) {
    std::unordered_map<std::string, std::uint32_t> intern;
    for (const auto& m : methods) {
        std::vector<std::uint32_t> ids;
        for (auto& line : clone_lines(m.body_source)) {
            auto [it, inserted] = intern.try_emplace(std::move(line), static_cast<std::uint32_t>(intern.size()));
            ids.push_back(it->second);
        }
        lines_[m.method_id] = std::move(ids);
    }
}

double CloneIndex::similarity(const MethodId& a, const MethodId& b) const {
    auto ia = lines_.find(a);
    auto ib = lines_.find(b);
    if (ia == lines_.end() || ib == lines_.end()) return 0.0;
    const auto& la = ia->second;
    const auto& lb = ib->second;
    if (la.empty() || lb.empty()) return 0.0;
    // An LCS can never exceed the shorter side.
    if (100.0 * static_cast<double>(std::min(la.size(), lb.size())) / static_cast<double>(std::max(la.size(), lb.size())) <
        kCloneReportThreshold) {
        return 0.0;
    }
    return score(lcs_impl<std::uint32_t>(la, lb), la.size(), lb.size());
}

}  // namespace cochange::analysis
