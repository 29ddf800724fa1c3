#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cochange/common/error.hpp"
#include "cochange/common/method_id.hpp"
#include "cochange/dataset/ranking_list.hpp"

namespace cochange::ltr {

enum class ModelType { Linear, Mart, RandomForest, CoordinateAscent };

std::string to_string(ModelType type);
/// Accepts "linear", "mart", "random-forest", "coordinate-ascent". Throws
/// ConfigError otherwise.
ModelType parse_model_type(const std::string& text);

/// Regression target derived from the integer co-change label.
enum class TargetTransform { Raw, Log1p };

std::string to_string(TargetTransform t);
TargetTransform parse_target_transform(const std::string& text);

/// Malformed, truncated or unsupported model file.
class ModelFormatError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

struct Normalization {
    std::vector<double> mean;
    std::vector<double> stddev;  // never 0; constant columns use 1

    [[nodiscard]] double apply(std::size_t feature, double x) const { return (x - mean[feature]) / stddev[feature]; }
    friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// Flat binary tree. Internal nodes send x[feature] < threshold left.
struct RegressionTree {
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        double value = 0.0;  // leaf output
        int left = -1;
        int right = -1;

        friend bool operator==(const Node&, const Node&) = default;
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] std::size_t leaf_count() const;
    friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

/// A trained ranker. Inputs are raw feature values in `feature_names`
/// order; normalization, when present, is applied inside predict.
struct TrainedModel {
    ModelType model_type = ModelType::RandomForest;
    std::vector<std::string> feature_names;
    std::optional<Normalization> normalization;
    std::uint64_t rng_seed = 0;
    TargetTransform target = TargetTransform::Raw;

    std::vector<double> weights;  // linear, coordinate ascent
    double intercept = 0.0;       // linear
    std::vector<RegressionTree> trees;
    std::vector<double> tree_weights;  // mart
    double base_score = 0.0;           // mart

    [[nodiscard]] double predict(std::span<const double> x) const;

    friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

/// Raw-space weights and intercept of a linear model (x not normalized).
std::pair<std::vector<double>, double> denormalized_linear(const TrainedModel& model);

/// Positions of the model's features in the canonical feature order.
/// Throws SchemaError for unknown names.
std::vector<std::size_t> feature_columns(const std::vector<std::string>& feature_names);

/// Model-ordered feature values for one candidate.
std::vector<double> model_inputs(const dataset::FeatureVector& features, std::span<const std::size_t> columns);

/// One score per candidate, in candidate order.
std::vector<double> predict_scores(const TrainedModel& model, const dataset::RankingList& list);

/// Indices sorted by score descending, ties broken by candidate id.
std::vector<std::size_t> order_by_scores(const dataset::RankingList& list, std::span<const double> scores);

/// Top min(k, n) candidates with their scores. Throws DataError for k < 1.
std::vector<std::pair<MethodId, double>> rank_candidates(const TrainedModel& model, const dataset::RankingList& list,
                                                         int k);

/// Deterministic JSON (sorted keys, shortest round-trip doubles).
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text, const std::string& origin = "<model>");
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

inline constexpr int kModelFormatVersion = 1;

}  // namespace cochange::ltr
