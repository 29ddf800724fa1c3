#include "cochange/ltr/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "cochange/common/parallel.hpp"
#include "cochange/common/rng.hpp"
#include "cochange/eval/metrics.hpp"

namespace cochange::ltr {

void TrainConfig::validate() const {
    auto positive = [](int v, const char* name) {
        if (v < 1) throw ConfigError(std::string(name) + " must be at least 1");
    };
    positive(forest.num_trees, "forest.num_trees");
    positive(forest.min_leaf, "forest.min_leaf");
    if (forest.features_per_split < 0) throw ConfigError("forest.features_per_split must be >= 0");
    if (!(forest.bag_fraction > 0.0 && forest.bag_fraction <= 1.0)) {
        throw ConfigError("forest.bag_fraction must be in (0, 1]");
    }
    positive(mart.num_trees, "mart.num_trees");
    positive(mart.max_leaves, "mart.max_leaves");
    positive(mart.min_leaf, "mart.min_leaf");
    if (!(mart.learning_rate > 0.0 && mart.learning_rate <= 1.0)) {
        throw ConfigError("mart.learning_rate must be in (0, 1]");
    }
    positive(coordinate_ascent.restarts, "coordinate_ascent.restarts");
    positive(coordinate_ascent.max_sweeps, "coordinate_ascent.max_sweeps");
    positive(coordinate_ascent.k, "coordinate_ascent.k");
    positive(coordinate_ascent.max_step_doublings, "coordinate_ascent.max_step_doublings");
    if (!(coordinate_ascent.step_scale > 0.0)) throw ConfigError("coordinate_ascent.step_scale must be positive");
    if (!(coordinate_ascent.tolerance >= 0.0)) throw ConfigError("coordinate_ascent.tolerance must be >= 0");
}

TrainingMatrix make_training_matrix(std::span<const dataset::RankingList> lists,
                                    const std::vector<std::string>& feature_names) {
    const auto columns = feature_columns(feature_names);
    TrainingMatrix m;
    m.features = columns.size();
    m.offsets.push_back(0);
    for (const auto& list : lists) {
        for (const auto& c : list.candidates) {
            const auto all = c.features.to_array();
            for (std::size_t col : columns) m.values.push_back(all[col]);
            m.labels.push_back(c.label);
        }
        m.offsets.push_back(m.labels.size());
    }
    return m;
}

namespace {

std::vector<double> targets_of(const TrainingMatrix& data, TargetTransform t) {
    std::vector<double> y(data.rows());
    for (std::size_t r = 0; r < y.size(); ++r) {
        y[r] = t == TargetTransform::Log1p ? std::log1p(static_cast<double>(data.labels[r]))
                                           : static_cast<double>(data.labels[r]);
    }
    return y;
}

Normalization fit_normalization(const TrainingMatrix& data) {
    Normalization n;
    const double rows = static_cast<double>(data.rows());
    n.mean.assign(data.features, 0.0);
    n.stddev.assign(data.features, 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t f = 0; f < data.features; ++f) n.mean[f] += data.values[r * data.features + f];
    }
    for (auto& m : n.mean) m /= rows;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t f = 0; f < data.features; ++f) {
            const double d = data.values[r * data.features + f] - n.mean[f];
            n.stddev[f] += d * d;
        }
    }
    for (auto& s : n.stddev) {
        s = std::sqrt(s / rows);
        if (!(s > 1e-12)) s = 1.0;
    }
    return n;
}

void train_forest(const TrainingMatrix& data, const TrainConfig& config, TrainedModel& model) {
    const auto y = targets_of(data, config.target);
    const int per_split = config.forest.features_per_split > 0
                              ? config.forest.features_per_split
                              : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(data.features)))));
    const auto bag = static_cast<std::size_t>(
        std::max(1.0, std::round(config.forest.bag_fraction * static_cast<double>(data.rows()))));
    model.trees.resize(static_cast<std::size_t>(config.forest.num_trees));
    parallel_for(model.trees.size(), config.jobs, [&](std::size_t t) {
        const std::uint64_t seed = config.rng_seed ^ static_cast<std::uint64_t>(t);
        Rng rng(seed);
        std::vector<double> weights(data.rows(), 0.0);
        for (std::size_t i = 0; i < bag; ++i) weights[rng.uniform_index(data.rows())] += 1.0;
        model.trees[t] = fit_regression_tree(data, y, weights, per_split, config.forest.min_leaf, 0, rng.next());
    });
}

void train_mart(const TrainingMatrix& data, const TrainConfig& config, TrainedModel& model) {
    const auto y = targets_of(data, config.target);
    const std::vector<double> weights(data.rows(), 1.0);
    model.base_score = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    std::vector<double> current(y.size(), model.base_score);
    std::vector<double> residual(y.size());
    for (int t = 0; t < config.mart.num_trees; ++t) {
        for (std::size_t r = 0; r < y.size(); ++r) residual[r] = y[r] - current[r];
        auto tree = fit_regression_tree(data, residual, weights, 0, config.mart.min_leaf, config.mart.max_leaves,
                                        config.rng_seed ^ static_cast<std::uint64_t>(t));
        for (std::size_t r = 0; r < y.size(); ++r) current[r] += config.mart.learning_rate * tree.predict(data.row(r));
        model.trees.push_back(std::move(tree));
        model.tree_weights.push_back(config.mart.learning_rate);
    }
}

void train_linear(const TrainingMatrix& data, const TrainConfig& config, TrainedModel& model) {
    const auto y = targets_of(data, config.target);
    const Normalization norm = fit_normalization(data);
    const auto rows = static_cast<Eigen::Index>(data.rows());
    const auto cols = static_cast<Eigen::Index>(data.features);
    Eigen::MatrixXd a(rows, cols + 1);
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index f = 0; f < cols; ++f) {
            a(r, f) = norm.apply(static_cast<std::size_t>(f), data.values[static_cast<std::size_t>(r * cols + f)]);
        }
        a(r, cols) = 1.0;
        b(r) = y[static_cast<std::size_t>(r)];
    }
    const Eigen::VectorXd w = a.colPivHouseholderQr().solve(b);
    model.weights.assign(w.data(), w.data() + cols);
    model.intercept = w(cols);
    model.normalization = norm;
}

/// Mean NDCG@k over lists using per-row scores; ties broken by row order,
/// which within a list is ascending candidate id.
class ListwiseObjective {
public:
    ListwiseObjective(const TrainingMatrix& data, int k) : data_(data), k_(k) {
        for (std::size_t l = 0; l + 1 < data.offsets.size(); ++l) {
            const std::span<const int> labels(data.labels.data() + data.offsets[l],
                                              data.offsets[l + 1] - data.offsets[l]);
            const double ideal = eval::ideal_dcg_at_k(labels, k);
            if (ideal > 0.0) {
                lists_.push_back(l);
                ideals_.push_back(ideal);
            }
        }
    }

    [[nodiscard]] double operator()(std::span<const double> scores) const {
        if (lists_.empty()) return 0.0;
        double total = 0.0;
        std::vector<std::size_t> order;
        std::vector<int> ranked;
        for (std::size_t i = 0; i < lists_.size(); ++i) {
            const std::size_t lo = data_.offsets[lists_[i]];
            const std::size_t hi = data_.offsets[lists_[i] + 1];
            order.resize(hi - lo);
            std::iota(order.begin(), order.end(), lo);
            const std::size_t top = std::min(order.size(), static_cast<std::size_t>(k_));
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  if (scores[a] != scores[b]) return scores[a] > scores[b];
                                  return a < b;
                              });
            ranked.clear();
            for (std::size_t j = 0; j < top; ++j) ranked.push_back(data_.labels[order[j]]);
            total += eval::dcg_at_k(ranked, k_) / ideals_[i];
        }
        return total / static_cast<double>(lists_.size());
    }

private:
    const TrainingMatrix& data_;
    int k_;
    std::vector<std::size_t> lists_;
    std::vector<double> ideals_;
};

void train_coordinate_ascent(const TrainingMatrix& data, const TrainConfig& config, TrainedModel& model,
                             CoordinateAscentTrace* trace) {
    const auto& ca = config.coordinate_ascent;
    const Normalization norm = fit_normalization(data);
    const std::size_t nf = data.features;
    std::vector<double> z(data.values.size());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t f = 0; f < nf; ++f) z[r * nf + f] = norm.apply(f, data.values[r * nf + f]);
    }
    const ListwiseObjective objective(data, ca.k);
    Rng rng(config.rng_seed);

    auto scores_for = [&](const std::vector<double>& w) {
        std::vector<double> s(data.rows(), 0.0);
        for (std::size_t r = 0; r < data.rows(); ++r) {
            for (std::size_t f = 0; f < nf; ++f) s[r] += w[f] * z[r * nf + f];
        }
        return s;
    };

    CoordinateAscentTrace local;
    std::vector<double> best_weights;
    double best_score = -1.0;
    for (int restart = 0; restart < ca.restarts; ++restart) {
        std::vector<double> w(nf);
        if (restart == 0) {
            std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(nf));
        } else {
            for (auto& x : w) x = rng.uniform(-1.0, 1.0);
        }
        std::vector<double> scores = scores_for(w);
        double current = objective(scores);
        local.initial.push_back(current);

        std::vector<double> trial(scores.size());
        for (int sweep = 0; sweep < ca.max_sweeps; ++sweep) {
            const double sweep_start = current;
            for (std::size_t f = 0; f < nf; ++f) {
                double best_delta = 0.0;
                double best_here = current;
                for (const double direction : {1.0, -1.0}) {
                    double step = ca.step_scale * direction;
                    for (int attempt = 0; attempt < ca.max_step_doublings; ++attempt, step *= 2.0) {
                        for (std::size_t r = 0; r < scores.size(); ++r) trial[r] = scores[r] + step * z[r * nf + f];
                        const double value = objective(trial);
                        if (value > best_here) {
                            best_here = value;
                            best_delta = step;
                        }
                    }
                }
                if (best_delta != 0.0) {
                    w[f] += best_delta;
                    for (std::size_t r = 0; r < scores.size(); ++r) scores[r] += best_delta * z[r * nf + f];
                    current = best_here;
                }
            }
            if (current - sweep_start < ca.tolerance) break;
        }
        local.final.push_back(current);
        if (current > best_score) {
            best_score = current;
            best_weights = w;
            local.best_restart = static_cast<std::size_t>(restart);
        }
    }
    model.weights = best_weights;
    model.normalization = norm;
    if (trace) *trace = std::move(local);
}

}  // namespace

TrainedModel train(std::span<const dataset::RankingList> lists, const std::vector<std::string>& feature_names,
                   const TrainConfig& config, CoordinateAscentTrace* trace) {
    config.validate();
    if (feature_names.empty()) throw SchemaError("no features to train on");
    const TrainingMatrix data = make_training_matrix(lists, feature_names);
    if (data.rows() == 0) throw DataError("cannot train on an empty dataset");

    TrainedModel model;
    model.model_type = config.model_type;
    model.feature_names = feature_names;
    model.rng_seed = config.rng_seed;
    model.target = config.model_type == ModelType::CoordinateAscent ? TargetTransform::Raw : config.target;
    switch (config.model_type) {
        case ModelType::RandomForest: train_forest(data, config, model); break;
        case ModelType::Mart: train_mart(data, config, model); break;
        case ModelType::Linear: train_linear(data, config, model); break;
        case ModelType::CoordinateAscent: train_coordinate_ascent(data, config, model, trace); break;
    }
    return model;
}

}  // namespace cochange::ltr
