#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "cochange/analysis/clone.hpp"
#include "cochange/analysis/normalize.hpp"
#include "cochange/analysis/snapshot.hpp"
#include "cochange/dataset/features.hpp"
#include "cochange/history/edit_history.hpp"

namespace {

using namespace cochange;

std::string java_method(std::mt19937_64& rng, int index, int statements) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::string body = "    public int m" + std::to_string(index) + "(int value, String label) {\n";
    body += "        int acc = value;\n";
    for (int s = 0; s < statements; ++s) {
        switch (pick(rng)) {
            case 0: body += "        acc += value * " + std::to_string(s) + ";\n"; break;
            case 1: body += "        if (acc > " + std::to_string(s) + ") { acc -= label.length(); }\n"; break;
            case 2: body += "        acc = helper(acc, \"" + std::to_string(s) + "\");\n"; break;
            default: body += "        for (int i = 0; i < acc; i++) { acc ^= i; }\n"; break;
        }
    }
    body += "        return acc;\n    }\n";
    return body;
}

std::vector<analysis::SourceFile> java_project(int files, int methods_per_file, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<analysis::SourceFile> out;
    for (int f = 0; f < files; ++f) {
        const std::string pkg = "bench.mod" + std::to_string(f % 6);
        std::string text = "package " + pkg + ";\n\npublic class Unit" + std::to_string(f) + " {\n";
        for (int m = 0; m < methods_per_file; ++m) text += java_method(rng, m, 6 + m % 10) + "\n";
        text += "    private int helper(int a, String b) { return a + b.length(); }\n}\n";
        out.push_back({"src/main/java/bench/mod" + std::to_string(f % 6) + "/Unit" + std::to_string(f) + ".java",
                       std::move(text)});
    }
    return out;
}

void BM_BuildSnapshot(benchmark::State& state) {
    const auto files = java_project(static_cast<int>(state.range(0)), 10, 1);
    std::size_t bytes = 0;
    for (const auto& f : files) bytes += f.content.size();
    for (auto _ : state) {
        auto snap = analysis::build_snapshot("", files);
        benchmark::DoNotOptimize(snap.methods.data());
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_BuildSnapshot)->Arg(10)->Arg(100);

void BM_LcsLength(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto lines_a = analysis::clone_lines(java_method(rng, 0, static_cast<int>(state.range(0))));
    const auto lines_b = analysis::clone_lines(java_method(rng, 1, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(analysis::lcs_length(lines_a, lines_b));
}
BENCHMARK(BM_LcsLength)->Arg(10)->Arg(100)->Arg(400);

void BM_CloneIndexSimilarity(benchmark::State& state) {
    const auto snap = analysis::build_snapshot("", java_project(20, 10, 5));
    const analysis::CloneIndex index(snap.methods);
    std::size_t i = 0;
    const std::size_t n = snap.methods.size();
    for (auto _ : state) {
        const auto& a = snap.methods[i % n].method_id;
        const auto& b = snap.methods[(i * 7 + 3) % n].method_id;
        benchmark::DoNotOptimize(index.similarity(a, b));
        ++i;
    }
}
BENCHMARK(BM_CloneIndexSimilarity);

void BM_FeatureCompute(benchmark::State& state) {
    const auto snap = analysis::build_snapshot("", java_project(20, 10, 7));
    const history::EditHistories histories;
    dataset::FeatureInputs inputs;
    inputs.methods = snap.methods;
    inputs.histories = &histories;
    const dataset::FeatureContext context(inputs);
    std::size_t i = 0;
    const std::size_t n = snap.methods.size();
    for (auto _ : state) {
        const auto v = context.compute(snap.methods[i % n].method_id, snap.methods[(i * 13 + 1) % n].method_id);
        benchmark::DoNotOptimize(v);
        ++i;
    }
}
BENCHMARK(BM_FeatureCompute);

}  // namespace
