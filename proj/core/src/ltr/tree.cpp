#include <algorithm>
#include <numeric>
#include <queue>

#include "cochange/common/error.hpp"
#include "cochange/common/rng.hpp"
#include "cochange/ltr/train.hpp"

namespace cochange::ltr {

namespace {

struct Split {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;  // rows in the left child
};

struct Pending {
    int node = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;
    Split split;
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingMatrix& data, std::span<const double> targets, std::span<const double> weights,
                int features_per_split, int min_leaf, std::uint64_t seed)
        : data_(data),
          targets_(targets),
          weights_(weights),
          features_per_split_(features_per_split <= 0 ? static_cast<int>(data.features)
                                                      : std::min<int>(features_per_split,
                                                                      static_cast<int>(data.features))),
          min_leaf_(std::max(1, min_leaf)),
          rng_(seed) {
        for (std::size_t r = 0; r < data.rows(); ++r) {
            if (weights[r] > 0.0) rows_.push_back(r);
        }
        order_.assign(data.features, rows_);
        for (std::size_t f = 0; f < data.features; ++f) {
            std::stable_sort(order_[f].begin(), order_[f].end(),
                             [&](std::size_t a, std::size_t b) { return value(a, f) < value(b, f); });
        }
        goes_left_.assign(data.rows(), 0);
        buffer_.resize(rows_.size());
    }

    RegressionTree build(int max_leaves) {
        RegressionTree tree;
        if (rows_.empty()) {
            tree.nodes.push_back(RegressionTree::Node{});
            return tree;
        }
        auto cmp = [](const Pending& a, const Pending& b) {
            if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
            return a.node > b.node;
        };
        std::priority_queue<Pending, std::vector<Pending>, decltype(cmp)> queue(cmp);

        tree.nodes.push_back(leaf(0, rows_.size()));
        queue.push(Pending{0, 0, rows_.size(), best_split(0, rows_.size())});
        std::size_t leaves = 1;
        while (!queue.empty()) {
            Pending p = queue.top();
            queue.pop();
            if (!p.split.valid) continue;
            if (max_leaves > 0 && leaves >= static_cast<std::size_t>(max_leaves)) break;
            partition(p.lo, p.hi, p.split);
            const std::size_t mid = p.lo + p.split.left_count;
            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(leaf(p.lo, mid));
            const int right = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(leaf(mid, p.hi));
            auto& n = tree.nodes[static_cast<std::size_t>(p.node)];
            n.feature = p.split.feature;
            n.threshold = p.split.threshold;
            n.left = left;
            n.right = right;
            ++leaves;
            queue.push(Pending{left, p.lo, mid, best_split(p.lo, mid)});
            queue.push(Pending{right, mid, p.hi, best_split(mid, p.hi)});
        }
        return preorder(tree);
    }

private:
    /// Renumbers nodes depth-first, left before right, matching the
    /// serialized layout. Internal nodes carry no value.
    static RegressionTree preorder(const RegressionTree& grown) {
        RegressionTree out;
        out.nodes.reserve(grown.nodes.size());
        auto visit = [&](auto&& self, int i) -> int {
            const auto& n = grown.nodes[static_cast<std::size_t>(i)];
            const int index = static_cast<int>(out.nodes.size());
            out.nodes.emplace_back();
            if (n.feature < 0) {
                out.nodes.back().value = n.value;
                return index;
            }
            const int left = self(self, n.left);
            const int right = self(self, n.right);
            auto& o = out.nodes[static_cast<std::size_t>(index)];
            o.feature = n.feature;
            o.threshold = n.threshold;
            o.left = left;
            o.right = right;
            return index;
        };
        visit(visit, 0);
        return out;
    }

    [[nodiscard]] double value(std::size_t row, std::size_t f) const { return data_.values[row * data_.features + f]; }

    RegressionTree::Node leaf(std::size_t lo, std::size_t hi) const {
        double w = 0.0;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t r = order_[0][i];
            w += weights_[r];
            s += weights_[r] * targets_[r];
        }
        RegressionTree::Node n;
        n.value = w > 0.0 ? s / w : 0.0;
        return n;
    }

    Split best_split(std::size_t lo, std::size_t hi) {
        Split best;
        const std::size_t count = hi - lo;
        if (count < 2 * static_cast<std::size_t>(min_leaf_)) return best;

        double total_w = 0.0;
        double total_s = 0.0;
        double total_ss = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t r = order_[0][i];
            total_w += weights_[r];
            total_s += weights_[r] * targets_[r];
            total_ss += weights_[r] * targets_[r] * targets_[r];
        }
        if (total_ss - total_s * total_s / total_w <= 1e-12 * std::max(1.0, total_ss)) return best;
        const double parent = total_s * total_s / total_w;

        std::vector<std::size_t> features(data_.features);
        std::iota(features.begin(), features.end(), std::size_t{0});
        const bool sample = features_per_split_ < static_cast<int>(data_.features);
        if (sample) rng_.shuffle(std::span<std::size_t>(features));

        int inspected = 0;
        for (std::size_t f : features) {
            if (sample && inspected >= features_per_split_) break;
            const auto& ord = order_[f];
            if (value(ord[lo], f) == value(ord[hi - 1], f)) continue;  // constant here; does not count
            ++inspected;
            double lw = 0.0;
            double ls = 0.0;
            for (std::size_t i = lo; i + 1 < hi; ++i) {
                const std::size_t r = ord[i];
                lw += weights_[r];
                ls += weights_[r] * targets_[r];
                const double here = value(r, f);
                const double next = value(ord[i + 1], f);
                if (here == next) continue;
                const std::size_t left_count = i + 1 - lo;
                if (left_count < static_cast<std::size_t>(min_leaf_) ||
                    count - left_count < static_cast<std::size_t>(min_leaf_)) {
                    continue;
                }
                const double rw = total_w - lw;
                const double rs = total_s - ls;
                const double gain = ls * ls / lw + rs * rs / rw - parent;
                if (gain > best.gain + 1e-12) {
                    best.valid = true;
                    best.feature = static_cast<int>(f);
                    best.threshold = next;
                    best.gain = gain;
                    best.left_count = left_count;
                }
            }
        }
        return best;
    }

    void partition(std::size_t lo, std::size_t hi, const Split& split) {
        const auto f = static_cast<std::size_t>(split.feature);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t r = order_[f][i];
            goes_left_[r] = value(r, f) < split.threshold ? 1 : 0;
        }
        for (auto& ord : order_) {
            std::size_t l = lo;
            std::size_t n_right = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                if (goes_left_[ord[i]]) {
                    ord[l++] = ord[i];
                } else {
                    buffer_[n_right++] = ord[i];
                }
            }
            std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(n_right),
                      ord.begin() + static_cast<std::ptrdiff_t>(l));
        }
    }

    const TrainingMatrix& data_;
    std::span<const double> targets_;
    std::span<const double> weights_;
    int features_per_split_;
    int min_leaf_;
    Rng rng_;
    std::vector<std::size_t> rows_;
    std::vector<std::vector<std::size_t>> order_;  // per feature, rows sorted by value within each node range
    std::vector<char> goes_left_;
    std::vector<std::size_t> buffer_;
};

}  // namespace

RegressionTree fit_regression_tree(const TrainingMatrix& data, std::span<const double> targets,
                                   std::span<const double> weights, int features_per_split, int min_leaf,
                                   int max_leaves, std::uint64_t seed) {
    if (targets.size() != data.rows() || weights.size() != data.rows()) {
        throw DataError("fit_regression_tree: targets and weights must match the row count");
    }
    if (data.features == 0) {
        RegressionTree t;
        t.nodes.push_back(RegressionTree::Node{});
        double w = 0.0;
        double s = 0.0;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            w += weights[r];
            s += weights[r] * targets[r];
        }
        t.nodes[0].value = w > 0.0 ? s / w : 0.0;
        return t;
    }
    TreeBuilder builder(data, targets, weights, features_per_split, min_leaf, seed);
    return builder.build(max_leaves);
}

}  // namespace cochange::ltr
