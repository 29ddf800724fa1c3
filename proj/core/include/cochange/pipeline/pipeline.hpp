#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "cochange/analysis/method_record.hpp"
#include "cochange/dataset/features.hpp"
#include "cochange/pipeline/config.hpp"
#include "cochange/pipeline/errors.hpp"

namespace cochange::pipeline {

/// File names inside the output directory.
namespace artifact {
inline constexpr const char* kCommits = "commits.jsonl";
inline constexpr const char* kChangeSets = "changesets.jsonl";
inline constexpr const char* kHistories = "histories.jsonl";
inline constexpr const char* kMethods = "methods.jsonl";
inline constexpr const char* kMapping = "pr-mapping.jsonl";
inline constexpr const char* kSnapshots = "snapshots";
inline constexpr const char* kWindows = "windows.json";
inline constexpr const char* kTrainSet = "dataset.train.jsonl";
inline constexpr const char* kTestSet = "dataset.test.jsonl";
inline constexpr const char* kTrainLetor = "dataset.train.letor";
inline constexpr const char* kTestLetor = "dataset.test.letor";
inline constexpr const char* kSchema = "schema.json";
inline constexpr const char* kModel = "model.json";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kImportance = "importance.json";
inline constexpr const char* kGrid = "grid.json";
inline constexpr const char* kManifests = "manifests";
inline constexpr const char* kLog = "run.log";
}  // namespace artifact

struct StageResult {
    std::string stage;
    bool up_to_date = false;
    std::vector<std::string> summary;  // human-readable lines
};

struct RankedCandidate {
    analysis::MethodRecord method;
    double score = 0.0;
    dataset::FeatureVector features;
};

struct RankResult {
    analysis::MethodRecord query;
    std::vector<std::string> feature_names;  // the model's features
    std::vector<RankedCandidate> top;

    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] std::string to_json() const;
};

/// Stage-file orchestration: each stage reads the files written by the
/// previous ones, writes its own outputs plus a manifest under
/// manifests/, and skips all work when the manifest shows identical
/// inputs and untouched outputs.
class Pipeline {
public:
    class Log;
    explicit Pipeline(RunConfig config);
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    [[nodiscard]] const RunConfig& config() const noexcept { return config_; }
    [[nodiscard]] std::filesystem::path path_of(const std::string& name) const { return config_.output_dir / name; }

    StageResult mine();
    StageResult build_datasets();
    StageResult train();
    StageResult evaluate();
    StageResult importance();
    StageResult grid();

    /// `query` is a method id or "path:line". Throws QueryResolutionError
    /// with near matches when it resolves to no single method.
    RankResult rank(const std::string& query, int k = 5);

private:
    RunConfig config_;
    std::unique_ptr<Log> log_;
};

}  // namespace cochange::pipeline
