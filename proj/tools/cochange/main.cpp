// cochange: mine co-change history, train rankers, evaluate, and rank.

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cochange/pipeline/config.hpp"
#include "cochange/pipeline/errors.hpp"
#include "cochange/pipeline/pipeline.hpp"

namespace {

using cochange::pipeline::ExitCode;
using cochange::pipeline::Pipeline;
using cochange::pipeline::RunConfig;
using cochange::pipeline::StageResult;

/// Command-line values, applied over the config file in the order given.
struct Overrides {
    std::vector<std::pair<std::string, std::string>> settings;

    // Registers `--flag VALUE` as an override of `key`.
    void option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { settings.emplace_back(key, v); }, help);
    }
};

void print(const StageResult& r) {
    for (const auto& line : r.summary) std::cout << line << '\n';
}

int fail(const std::string& stage, const std::exception& e) {
    std::cerr << "cochange " << stage << ": error: " << e.what() << '\n';
    if (const auto* q = dynamic_cast<const cochange::pipeline::QueryResolutionError*>(&e)) {
        if (q->suggestions().empty()) {
            std::cerr << "no similar methods found\n";
        } else {
            std::cerr << "did you mean:\n";
            for (const auto& s : q->suggestions()) std::cerr << "  " << s << '\n';
        }
    }
    return static_cast<int>(cochange::pipeline::exit_code_for(e));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recommend methods that are likely to change together with a given method."};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides overrides;
    std::string config_file;
    app.add_option("--config", config_file, "INI file with [section] key = value settings")->check(CLI::ExistingFile);
    overrides.option(&app, "--seed", "run.seed", "random seed for training and importance");
    overrides.option(&app, "--jobs", "run.jobs", "worker threads (default: available cores)");
    overrides.option(&app, "--output-dir", "output.dir", "artifact directory (default: cochange-out)");
    app.add_option_function<std::vector<std::string>>(
           "--set",
           [&](const std::vector<std::string>& items) {
               for (const auto& item : items) {
                   const auto eq = item.find('=');
                   if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected section.key=value");
                   overrides.settings.emplace_back(item.substr(0, eq), item.substr(eq + 1));
               }
           },
           "override any setting, e.g. --set forest.num_trees=500")
        ->type_name("KEY=VALUE")
        ->take_all();

    auto* mine = app.add_subcommand("mine", "mine commits, change sets and method histories");
    overrides.option(mine, "--repo", "repo.path", "git repository to mine");
    overrides.option(mine, "--until", "repo.until", "ignore commits after this ISO-8601 time");
    overrides.option(mine, "--mapping", "mining.mapping", "pull request mapping: none, offline or api");
    overrides.option(mine, "--mapping-file", "mining.mapping_file", "offline mapping JSONL");
    overrides.option(mine, "--github-repo", "mining.github_repo", "owner/name for the api mapping (token: GITHUB_TOKEN)");
    overrides.option(mine, "--github-api-url", "mining.github_api_url", "API base URL");

    auto* dataset = app.add_subcommand("dataset", "build train and test ranking lists");
    overrides.option(dataset, "--train-label-days", "window.train_label_days", "length of the training label period");
    overrides.option(dataset, "--test-label-days", "window.test_label_days", "length of the test label period");
    overrides.option(dataset, "--blocking", "dataset.blocking", "keep only plausible candidates (true/false)");
    overrides.option(dataset, "--embeddings", "dataset.embeddings", "fallback or external");
    overrides.option(dataset, "--embeddings-file", "dataset.embeddings_file", "embeddings JSONL for external");
    overrides.option(dataset, "--correlation-threshold", "dataset.correlation_threshold", "Spearman pruning threshold");

    auto* train = app.add_subcommand("train", "train a ranking model");
    overrides.option(train, "--model-type", "model.type", "linear, mart, random-forest or coordinate-ascent");
    overrides.option(train, "--target", "model.target", "raw or log1p");

    auto* evaluate = app.add_subcommand("evaluate", "score the model and baselines on the test set");
    overrides.option(evaluate, "--k", "evaluate.k_values", "comma-separated cutoffs");

    auto* importance = app.add_subcommand("importance", "permutation feature importance on the test set");
    overrides.option(importance, "--repetitions", "importance.repetitions", "shuffles per feature");
    overrides.option(importance, "--k", "importance.k", "NDCG cutoff");

    auto* grid = app.add_subcommand("grid", "train/test window experiment");
    overrides.option(grid, "--train-days", "grid.train_days", "comma-separated training label periods");
    overrides.option(grid, "--test-days", "grid.test_days", "comma-separated test label periods");

    auto* rank = app.add_subcommand("rank", "list the methods most likely to co-change with a method");
    std::string query;
    int k = 5;
    bool as_json = false;
    rank->add_option("query", query, "method id or path:line")->required();
    rank->add_option("-k", k, "number of candidates")->capture_default_str();
    rank->add_flag("--json", as_json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    const std::string stage = app.get_subcommands().front()->get_name();
    try {
        RunConfig config = cochange::pipeline::default_config();
        if (!config_file.empty()) cochange::pipeline::apply_config_file(config, config_file);
        for (const auto& [key, value] : overrides.settings) cochange::pipeline::apply_setting(config, key, value);

        Pipeline pipeline(std::move(config));
        if (stage == "mine") {
            print(pipeline.mine());
        } else if (stage == "dataset") {
            print(pipeline.build_datasets());
        } else if (stage == "train") {
            print(pipeline.train());
        } else if (stage == "evaluate") {
            print(pipeline.evaluate());
        } else if (stage == "importance") {
            print(pipeline.importance());
        } else if (stage == "grid") {
            print(pipeline.grid());
        } else {
            const auto result = pipeline.rank(query, k);
            std::cout << (as_json ? result.to_json() : result.to_text());
        }
    } catch (const std::exception& e) {
        return fail(stage, e);
    }
    return 0;
}
