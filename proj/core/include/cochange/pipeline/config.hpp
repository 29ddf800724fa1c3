#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cochange/ltr/train.hpp"

namespace cochange::pipeline {

enum class MappingSource { None, Offline, Api };
enum class EmbeddingSource { Fallback, External };

/// Everything a run depends on. Every field has a "section.key" name used
/// by config files and command-line overrides.
struct RunConfig {
    std::filesystem::path repo_path;
    std::filesystem::path output_dir = "cochange-out";
    std::optional<std::string> until;  // ISO-8601 UTC (a plain date means midnight); mining ignores later commits

    MappingSource mapping = MappingSource::None;
    std::filesystem::path mapping_file;
    std::string github_repo;  // "owner/name"
    std::string github_api_url = "https://api.github.com";
    int github_max_retries = 5;

    int train_label_days = 180;
    int test_label_days = 180;
    bool blocking = false;
    EmbeddingSource embeddings = EmbeddingSource::Fallback;
    std::filesystem::path embeddings_file;
    double correlation_threshold = 0.7;

    ltr::TrainConfig train;  // train.rng_seed is the run seed
    std::vector<int> k_values{1, 3, 5, 10};
    int importance_repetitions = 5;
    int importance_k = 5;
    std::vector<int> grid_train_days{30, 90, 180};
    std::vector<int> grid_test_days{5, 10, 20, 30, 60, 90, 120, 150, 180, 270};

    unsigned jobs = 1;

    [[nodiscard]] std::uint64_t seed() const noexcept { return train.rng_seed; }
};

/// Defaults, with jobs set to the available cores.
RunConfig default_config();

/// Sets one "section.key" value. Throws ConfigError for unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads an INI-style file ("[section]" headers, "key = value" lines, '#'
/// or ';' comments) and applies every entry. Throws ConfigError.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Canonical "section.key" -> value listing of every setting.
std::map<std::string, std::string> settings_of(const RunConfig& config);

/// Checks cross-field constraints. Throws ConfigError.
void validate(const RunConfig& config);

std::string to_string(MappingSource m);
std::string to_string(EmbeddingSource e);

}  // namespace cochange::pipeline
