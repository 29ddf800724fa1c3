#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cochange/analysis/call_graph.hpp"
#include "cochange/analysis/clone.hpp"
#include "cochange/analysis/embedding.hpp"
#include "cochange/analysis/method_record.hpp"
#include "cochange/common/time.hpp"
#include "cochange/history/change_set.hpp"
#include "cochange/history/edit_history.hpp"

namespace cochange::dataset {

inline constexpr std::size_t kFeatureCount = 10;

/// Canonical feature order. Indices are stable and used by model files.
enum class Feature : std::size_t {
    CoChangeCount,
    AuthorSimilarity,
    SemanticSimilarity,
    PathSimilarity,
    CodeDependency,
    HierarchySimilarity,
    CloneSimilarity,
    PackageSimilarity,
    ArgTypeSimilarity,
    ArgNameSimilarity,
};

const std::array<std::string, kFeatureCount>& feature_names();
std::optional<std::size_t> feature_index(std::string_view name);

/// Relationship between a query method and one candidate.
struct FeatureVector {
    int co_change_count = 0;
    double author_similarity = 0.0;
    double semantic_similarity = 0.0;
    double path_similarity = 0.0;
    int code_dependency = 0;
    bool hierarchy_similarity = false;
    double clone_similarity = 0.0;
    double package_similarity = 0.0;
    double arg_type_similarity = 0.0;
    double arg_name_similarity = 0.0;

    [[nodiscard]] std::array<double, kFeatureCount> to_array() const;
    [[nodiscard]] double get(Feature f) const { return to_array()[static_cast<std::size_t>(f)]; }
    /// Integer and boolean fields are rounded; throws DataError for values
    /// outside a feature's range.
    static FeatureVector from_array(const std::array<double, kFeatureCount>& values);

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Throws DataError naming the first feature outside its declared range.
void check_ranges(const FeatureVector& v);

/// Common tokens (multiset intersection) over the longer token count.
/// Two empty paths are identical (1); one empty path shares nothing (0).
double path_similarity(std::string_view a, std::string_view b, char separator = '/');

/// |a ∩ b| / |a ∪ b|; two empty sets give 1.
double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b);

/// True iff the two superclass chains share a type. Chains never include
/// the universal root.
bool share_superclass(std::span<const std::string> a, std::span<const std::string> b);

/// Number of change sets merged inside `period` whose methods include both.
int co_change_count(const MethodId& q, const MethodId& c, std::span<const history::ChangeSet> change_sets,
                    const TimeRange& period);

/// Per-method sorted change-set indices for one period; answers
/// co_change_count queries by sorted intersection.
class CoChangeIndex {
public:
    CoChangeIndex() = default;
    CoChangeIndex(std::span<const history::ChangeSet> change_sets, const TimeRange& period);

    [[nodiscard]] int count(const MethodId& q, const MethodId& c) const;
    [[nodiscard]] std::size_t change_sets_of(const MethodId& m) const;

private:
    std::unordered_map<MethodId, std::vector<std::uint32_t>> sets_;
};

struct FeatureInputs {
    std::span<const analysis::MethodRecord> methods;  // the snapshot at the end of the period
    const history::EditHistories* histories = nullptr;
    std::span<const history::ChangeSet> change_sets;
    TimeRange period;
    /// Optional. A pair falls back to token-hash vectors when either side
    /// has no external vector.
    const analysis::ExternalEmbeddings* embeddings = nullptr;
};

/// Everything needed to compute feature vectors over one snapshot and one
/// feature period, built once and shared read-only across workers.
class FeatureContext {
public:
    explicit FeatureContext(const FeatureInputs& inputs);

    /// Throws DataError if either id is not in the snapshot.
    [[nodiscard]] FeatureVector compute(const MethodId& q, const MethodId& c) const;

    [[nodiscard]] const analysis::MethodRecord* find(const MethodId& id) const;
    [[nodiscard]] const CoChangeIndex& co_changes() const noexcept { return co_changes_; }
    [[nodiscard]] const analysis::CallGraph& call_graph() const noexcept { return call_graph_; }
    [[nodiscard]] const TimeRange& period() const noexcept { return period_; }

private:
    struct Entry {
        const analysis::MethodRecord* record = nullptr;
        std::set<std::string> authors;
        std::set<std::string> param_types;
        std::set<std::string> param_names;
        analysis::EmbeddingVector fallback;
        std::optional<analysis::EmbeddingVector> external;
    };

    [[nodiscard]] const Entry& entry(const MethodId& id) const;

    TimeRange period_;
    std::unordered_map<MethodId, Entry> entries_;
    CoChangeIndex co_changes_;
    analysis::CallGraph call_graph_;
    analysis::CloneIndex clones_;
};

}  // namespace cochange::dataset
