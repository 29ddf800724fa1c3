#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cochange/eval/metrics.hpp"
#include "cochange/eval/wilcoxon.hpp"

namespace {

using namespace cochange;

void BM_NdcgAtK(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(19);
    std::poisson_distribution<int> gains(0.3);
    std::vector<int> labels(n);
    for (auto& l : labels) l = gains(rng);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(eval::ndcg_at_k(order, labels, 10));
}
BENCHMARK(BM_NdcgAtK)->Arg(100)->Arg(10000);

void BM_WilcoxonSignedRank(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = unit(rng);
        b[i] = a[i] + 0.1 * (unit(rng) - 0.4);
    }
    for (auto _ : state) benchmark::DoNotOptimize(eval::wilcoxon_signed_rank(a, b));
}
BENCHMARK(BM_WilcoxonSignedRank)->Arg(20)->Arg(1000);

}  // namespace
