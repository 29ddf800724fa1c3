#include "cochange/ltr/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cochange/dataset/features.hpp"

namespace cochange::ltr {

using nlohmann::json;

std::string to_string(ModelType type) {
    switch (type) {
        case ModelType::Linear: return "linear";
        case ModelType::Mart: return "mart";
        case ModelType::RandomForest: return "random-forest";
        case ModelType::CoordinateAscent: return "coordinate-ascent";
    }
    return "random-forest";
}

ModelType parse_model_type(const std::string& text) {
    if (text == "linear") return ModelType::Linear;
    if (text == "mart") return ModelType::Mart;
    if (text == "random-forest") return ModelType::RandomForest;
    if (text == "coordinate-ascent") return ModelType::CoordinateAscent;
    throw ConfigError("unknown model type '" + text +
                      "' (expected linear, mart, random-forest or coordinate-ascent)");
}

std::string to_string(TargetTransform t) { return t == TargetTransform::Log1p ? "log1p" : "raw"; }

TargetTransform parse_target_transform(const std::string& text) {
    if (text == "raw") return TargetTransform::Raw;
    if (text == "log1p") return TargetTransform::Log1p;
    throw ConfigError("unknown target transform '" + text + "' (expected raw or log1p)");
}

double RegressionTree::predict(std::span<const double> x) const {
    int i = 0;
    for (;;) {
        const Node& n = nodes[static_cast<std::size_t>(i)];
        if (n.feature < 0) return n.value;
        i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature < 0; }));
}

double TrainedModel::predict(std::span<const double> x) const {
    if (x.size() != feature_names.size()) {
        throw SchemaError("expected " + std::to_string(feature_names.size()) + " features, got " +
                          std::to_string(x.size()));
    }
    switch (model_type) {
        case ModelType::Linear:
        case ModelType::CoordinateAscent: {
            double s = model_type == ModelType::Linear ? intercept : 0.0;
            for (std::size_t f = 0; f < x.size(); ++f) {
                s += weights[f] * (normalization ? normalization->apply(f, x[f]) : x[f]);
            }
            return s;
        }
        case ModelType::RandomForest: {
            if (trees.empty()) return 0.0;
            double s = 0.0;
            for (const auto& t : trees) s += t.predict(x);
            return s / static_cast<double>(trees.size());
        }
        case ModelType::Mart: {
            double s = base_score;
            for (std::size_t i = 0; i < trees.size(); ++i) s += tree_weights[i] * trees[i].predict(x);
            return s;
        }
    }
    return 0.0;
}

std::pair<std::vector<double>, double> denormalized_linear(const TrainedModel& model) {
    std::vector<double> w = model.weights;
    double b = model.model_type == ModelType::Linear ? model.intercept : 0.0;
    if (model.normalization) {
        for (std::size_t f = 0; f < w.size(); ++f) {
            w[f] = model.weights[f] / model.normalization->stddev[f];
            b -= model.weights[f] * model.normalization->mean[f] / model.normalization->stddev[f];
        }
    }
    return {w, b};
}

std::vector<std::size_t> feature_columns(const std::vector<std::string>& feature_names) {
    std::vector<std::size_t> out;
    for (const auto& name : feature_names) {
        auto i = dataset::feature_index(name);
        if (!i) throw SchemaError("unknown feature '" + name + "'");
        out.push_back(*i);
    }
    return out;
}

std::vector<double> model_inputs(const dataset::FeatureVector& features, std::span<const std::size_t> columns) {
    const auto all = features.to_array();
    std::vector<double> x(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) x[i] = all[columns[i]];
    return x;
}

std::vector<double> predict_scores(const TrainedModel& model, const dataset::RankingList& list) {
    const auto columns = feature_columns(model.feature_names);
    std::vector<double> scores;
    scores.reserve(list.candidates.size());
    for (const auto& c : list.candidates) scores.push_back(model.predict(model_inputs(c.features, columns)));
    return scores;
}

std::vector<std::size_t> order_by_scores(const dataset::RankingList& list, std::span<const double> scores) {
    std::vector<std::size_t> order(list.candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return list.candidates[a].id < list.candidates[b].id;
    });
    return order;
}

std::vector<std::pair<MethodId, double>> rank_candidates(const TrainedModel& model, const dataset::RankingList& list,
                                                         int k) {
    if (k < 1) throw DataError("k must be at least 1");
    const auto scores = predict_scores(model, list);
    auto order = order_by_scores(list, scores);
    order.resize(std::min(order.size(), static_cast<std::size_t>(k)));
    std::vector<std::pair<MethodId, double>> out;
    for (std::size_t i : order) out.emplace_back(list.candidates[i].id, scores[i]);
    return out;
}

namespace {

json tree_to_json(const RegressionTree& tree, int i) {
    const auto& n = tree.nodes[static_cast<std::size_t>(i)];
    if (n.feature < 0) return json{{"leaf", n.value}};
    return json{{"feature", n.feature},
                {"threshold", n.threshold},
                {"left", tree_to_json(tree, n.left)},
                {"right", tree_to_json(tree, n.right)}};
}

int tree_from_json(const json& j, RegressionTree& tree, std::size_t features, int depth) {
    if (depth > 10000) throw ModelFormatError("tree too deep");
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("leaf")) {
        tree.nodes[static_cast<std::size_t>(index)].value = j.at("leaf").get<double>();
        return index;
    }
    const int feature = j.at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= features) {
        throw ModelFormatError("tree feature index " + std::to_string(feature) + " out of range");
    }
    const double threshold = j.at("threshold").get<double>();
    const int left = tree_from_json(j.at("left"), tree, features, depth + 1);
    const int right = tree_from_json(j.at("right"), tree, features, depth + 1);
    auto& n = tree.nodes[static_cast<std::size_t>(index)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return index;
}

RegressionTree read_tree(const json& j, std::size_t features) {
    RegressionTree t;
    tree_from_json(j, t, features, 0);
    return t;
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
    json params;
    switch (m.model_type) {
        case ModelType::Linear:
            params = json{{"weights", m.weights}, {"intercept", m.intercept}, {"target", to_string(m.target)}};
            break;
        case ModelType::CoordinateAscent:
            params = json{{"weights", m.weights}};
            break;
        case ModelType::RandomForest: {
            json trees = json::array();
            for (const auto& t : m.trees) trees.push_back(tree_to_json(t, 0));
            params = json{{"trees", std::move(trees)}, {"target", to_string(m.target)}};
            break;
        }
        case ModelType::Mart: {
            json trees = json::array();
            for (std::size_t i = 0; i < m.trees.size(); ++i) {
                trees.push_back(json{{"tree", tree_to_json(m.trees[i], 0)}, {"weight", m.tree_weights[i]}});
            }
            params = json{{"base", m.base_score}, {"trees", std::move(trees)}, {"target", to_string(m.target)}};
            break;
        }
    }
    json normalization = nullptr;
    if (m.normalization) {
        normalization = json{{"mean", m.normalization->mean}, {"stddev", m.normalization->stddev}};
    }
    const json doc{{"format_version", kModelFormatVersion},
                   {"model_type", to_string(m.model_type)},
                   {"feature_names", m.feature_names},
                   {"normalization", std::move(normalization)},
                   {"rng_seed", m.rng_seed},
                   {"parameters", std::move(params)}};
    return doc.dump() + "\n";
}

TrainedModel model_from_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelFormatError(origin + ": malformed model file: " + e.what());
    }
    try {
        if (!doc.is_object()) throw ModelFormatError("model file is not a JSON object");
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw ModelFormatError("unsupported model format_version " + std::to_string(version) + " (expected " +
                                   std::to_string(kModelFormatVersion) + ")");
        }
        TrainedModel m;
        const auto type = doc.at("model_type").get<std::string>();
        try {
            m.model_type = parse_model_type(type);
        } catch (const ConfigError&) {
            throw ModelFormatError("unknown model_type '" + type + "' in format_version " + std::to_string(version));
        }
        m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        (void)feature_columns(m.feature_names);
        m.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
        const std::size_t nf = m.feature_names.size();
        const auto& norm = doc.at("normalization");
        if (!norm.is_null()) {
            Normalization n{norm.at("mean").get<std::vector<double>>(), norm.at("stddev").get<std::vector<double>>()};
            if (n.mean.size() != nf || n.stddev.size() != nf) throw ModelFormatError("normalization size mismatch");
            if (std::any_of(n.stddev.begin(), n.stddev.end(), [](double s) { return !(s > 0.0); })) {
                throw ModelFormatError("normalization stddev must be positive");
            }
            m.normalization = std::move(n);
        }
        const auto& p = doc.at("parameters");
        if (p.contains("target")) {
            try {
                m.target = parse_target_transform(p.at("target").get<std::string>());
            } catch (const ConfigError& e) {
                throw ModelFormatError(e.what());
            }
        }
        switch (m.model_type) {
            case ModelType::Linear:
                m.intercept = p.at("intercept").get<double>();
                [[fallthrough]];
            case ModelType::CoordinateAscent:
                m.weights = p.at("weights").get<std::vector<double>>();
                if (m.weights.size() != nf) throw ModelFormatError("weight count does not match feature_names");
                break;
            case ModelType::RandomForest:
                for (const auto& t : p.at("trees")) m.trees.push_back(read_tree(t, nf));
                break;
            case ModelType::Mart:
                m.base_score = p.at("base").get<double>();
                for (const auto& t : p.at("trees")) {
                    m.trees.push_back(read_tree(t.at("tree"), nf));
                    m.tree_weights.push_back(t.at("weight").get<double>());
                }
                break;
        }
        return m;
    } catch (const ModelFormatError& e) {
        throw ModelFormatError(origin + ": " + e.what());
    } catch (const json::exception& e) {
        throw ModelFormatError(origin + ": malformed model file: " + e.what());
    } catch (const SchemaError& e) {
        throw ModelFormatError(origin + ": " + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << model_to_json(model);
    if (!out) throw DataError("failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str(), path.string());
}

}  // namespace cochange::ltr
