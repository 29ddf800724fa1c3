#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "cochange/dataset/features.hpp"
#include "cochange/ltr/model.hpp"
#include "cochange/ltr/train.hpp"

namespace {

using namespace cochange;

std::vector<dataset::RankingList> synthetic_lists(int queries, int candidates, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> counts(1.5);
    std::vector<dataset::RankingList> lists;
    for (int q = 0; q < queries; ++q) {
        dataset::RankingList list;
        list.query = MethodId("q" + std::to_string(q));
        for (int c = 0; c < candidates; ++c) {
            dataset::Candidate cand;
            cand.id = MethodId("c" + std::to_string(c));
            auto& f = cand.features;
            f.co_change_count = counts(rng);
            f.author_similarity = unit(rng);
            f.semantic_similarity = unit(rng);
            f.path_similarity = unit(rng);
            f.code_dependency = unit(rng) < 0.1 ? 1 : 0;
            f.hierarchy_similarity = unit(rng) < 0.2;
            f.clone_similarity = unit(rng) < 0.05 ? 70.0 + 30.0 * unit(rng) : 0.0;
            f.package_similarity = unit(rng);
            f.arg_type_similarity = unit(rng);
            f.arg_name_similarity = unit(rng);
            const double signal = f.co_change_count + 2.0 * f.code_dependency + f.path_similarity;
            cand.label = unit(rng) < signal / 6.0 ? 1 + counts(rng) : 0;
            list.candidates.push_back(cand);
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

std::vector<std::string> all_features() {
    const auto& names = dataset::feature_names();
    return {names.begin(), names.end()};
}

void train_bench(benchmark::State& state, ltr::ModelType type) {
    const auto lists = synthetic_lists(static_cast<int>(state.range(0)), 50, 11);
    ltr::TrainConfig config;
    config.model_type = type;
    config.forest.num_trees = 20;
    config.mart.num_trees = 20;
    config.coordinate_ascent.restarts = 1;
    const auto names = all_features();
    for (auto _ : state) {
        auto model = ltr::train(lists, names, config);
        benchmark::DoNotOptimize(model);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 50);
}

void BM_TrainRandomForest(benchmark::State& state) { train_bench(state, ltr::ModelType::RandomForest); }
BENCHMARK(BM_TrainRandomForest)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainMart(benchmark::State& state) { train_bench(state, ltr::ModelType::Mart); }
BENCHMARK(BM_TrainMart)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainLinear(benchmark::State& state) { train_bench(state, ltr::ModelType::Linear); }
BENCHMARK(BM_TrainLinear)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainCoordinateAscent(benchmark::State& state) { train_bench(state, ltr::ModelType::CoordinateAscent); }
BENCHMARK(BM_TrainCoordinateAscent)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FitRegressionTree(benchmark::State& state) {
    const auto lists = synthetic_lists(100, 50, 13);
    const auto matrix = ltr::make_training_matrix(lists, all_features());
    std::vector<double> targets(matrix.labels.begin(), matrix.labels.end());
    const std::vector<double> weights(matrix.rows(), 1.0);
    const int max_leaves = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto tree = ltr::fit_regression_tree(matrix, targets, weights, 0, 1, max_leaves, 42);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_FitRegressionTree)->Arg(10)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
    const auto lists = synthetic_lists(50, 100, 17);
    ltr::TrainConfig config;
    config.forest.num_trees = 100;
    const auto model = ltr::train(lists, all_features(), config);
    for (auto _ : state) {
        for (const auto& list : lists) benchmark::DoNotOptimize(ltr::predict_scores(model, list));
    }
    state.SetItemsProcessed(state.iterations() * 50 * 100);
}
BENCHMARK(BM_PredictForest)->Unit(benchmark::kMillisecond);

}  // namespace
