#include "cochange/pipeline/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cochange/common/error.hpp"
#include "cochange/common/parallel.hpp"
#include "cochange/common/text.hpp"
#include "cochange/common/time.hpp"

namespace cochange::pipeline {

std::string to_string(MappingSource m) {
    switch (m) {
        case MappingSource::None: return "none";
        case MappingSource::Offline: return "offline";
        case MappingSource::Api: return "api";
    }
    return "none";
}

std::string to_string(EmbeddingSource e) { return e == EmbeddingSource::External ? "external" : "fallback"; }

RunConfig default_config() {
    RunConfig c;
    c.jobs = default_jobs();
    return c;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    T value{};
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw ConfigError("invalid value '" + text + "' for " + key);
    }
    return value;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid value '" + text + "' for " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = to_lower(trim(text));
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("invalid boolean '" + text + "' for " + key);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (const auto& part : split_nonempty(text, ',')) out.push_back(parse_number<int>(key, part));
    if (out.empty()) throw ConfigError(key + " needs at least one value");
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string format_double(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"repo.path", [](RunConfig& c, const std::string&, const std::string& v) { c.repo_path = trim(v); }},
        {"repo.until",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             std::string t = trim(v);
             if (t.empty()) {
                 c.until.reset();
                 return;
             }
             if (t.size() == 10) t += "T00:00:00Z";  // plain date
             try {
                 (void)parse_iso8601(t);
             } catch (const Error&) {
                 throw ConfigError("invalid timestamp '" + v + "' for " + k);
             }
             c.until = t;
         }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
        {"mining.mapping",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "none") c.mapping = MappingSource::None;
             else if (t == "offline") c.mapping = MappingSource::Offline;
             else if (t == "api") c.mapping = MappingSource::Api;
             else throw ConfigError("invalid value '" + v + "' for " + k + " (expected none, offline or api)");
         }},
        {"mining.mapping_file", [](RunConfig& c, const std::string&, const std::string& v) { c.mapping_file = trim(v); }},
        {"mining.github_repo", [](RunConfig& c, const std::string&, const std::string& v) { c.github_repo = trim(v); }},
        {"mining.github_api_url",
         [](RunConfig& c, const std::string&, const std::string& v) { c.github_api_url = trim(v); }},
        {"mining.max_retries",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.github_max_retries = parse_number<int>(k, v); }},
        {"window.train_label_days",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train_label_days = parse_number<int>(k, v); }},
        {"window.test_label_days",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.test_label_days = parse_number<int>(k, v); }},
        {"dataset.blocking",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.blocking = parse_bool(k, v); }},
        {"dataset.embeddings",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "fallback") c.embeddings = EmbeddingSource::Fallback;
             else if (t == "external") c.embeddings = EmbeddingSource::External;
             else throw ConfigError("invalid value '" + v + "' for " + k + " (expected fallback or external)");
         }},
        {"dataset.embeddings_file",
         [](RunConfig& c, const std::string&, const std::string& v) { c.embeddings_file = trim(v); }},
        {"dataset.correlation_threshold",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.correlation_threshold = parse_double(k, v); }},
        {"model.type",
         [](RunConfig& c, const std::string&, const std::string& v) { c.train.model_type = ltr::parse_model_type(trim(v)); }},
        {"model.target",
         [](RunConfig& c, const std::string&, const std::string& v) { c.train.target = ltr::parse_target_transform(trim(v)); }},
        {"forest.num_trees",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.forest.num_trees = parse_number<int>(k, v); }},
        {"forest.features_per_split",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.forest.features_per_split = trim(v) == "sqrt" ? 0 : parse_number<int>(k, v);
         }},
        {"forest.min_leaf",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.forest.min_leaf = parse_number<int>(k, v); }},
        {"forest.bag_fraction",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.forest.bag_fraction = parse_double(k, v); }},
        {"mart.num_trees",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.mart.num_trees = parse_number<int>(k, v); }},
        {"mart.learning_rate",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.mart.learning_rate = parse_double(k, v); }},
        {"mart.max_leaves",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.mart.max_leaves = parse_number<int>(k, v); }},
        {"mart.min_leaf",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.mart.min_leaf = parse_number<int>(k, v); }},
        {"coordinate_ascent.restarts",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.coordinate_ascent.restarts = parse_number<int>(k, v);
         }},
        {"coordinate_ascent.step_scale",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.coordinate_ascent.step_scale = parse_double(k, v);
         }},
        {"coordinate_ascent.tolerance",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.coordinate_ascent.tolerance = parse_double(k, v);
         }},
        {"coordinate_ascent.max_sweeps",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.coordinate_ascent.max_sweeps = parse_number<int>(k, v);
         }},
        {"coordinate_ascent.k",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.train.coordinate_ascent.k = parse_number<int>(k, v); }},
        {"evaluate.k_values",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.k_values = parse_int_list(k, v); }},
        {"importance.repetitions",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.importance_repetitions = parse_number<int>(k, v);
         }},
        {"importance.k",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.importance_k = parse_number<int>(k, v); }},
        {"grid.train_days",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.grid_train_days = parse_int_list(k, v); }},
        {"grid.test_days",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.grid_test_days = parse_int_list(k, v); }},
        {"run.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.train.rng_seed = parse_number<std::uint64_t>(k, v);
         }},
        {"run.jobs",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const int jobs = parse_number<int>(k, v);
             c.jobs = jobs <= 0 ? default_jobs() : static_cast<unsigned>(jobs);
         }},
    };
    return table;
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown setting '" + key + "'");
    it->second(config, key, value);
    config.train.jobs = config.jobs;
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config file: " + std::string(e.what()));
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(path.string() + ": setting '" + section + "' outside a [section]");
        for (const auto& [key, value] : body) {
            try {
                apply_setting(config, section + "." + key, value.data());
            } catch (const ConfigError& e) {
                throw ConfigError(path.string() + ": " + e.what());
            }
        }
    }
}

std::map<std::string, std::string> settings_of(const RunConfig& c) {
    const auto& t = c.train;
    return {
        {"repo.path", c.repo_path.string()},
        {"repo.until", c.until.value_or("")},
        {"output.dir", c.output_dir.string()},
        {"mining.mapping", to_string(c.mapping)},
        {"mining.mapping_file", c.mapping_file.string()},
        {"mining.github_repo", c.github_repo},
        {"mining.github_api_url", c.github_api_url},
        {"mining.max_retries", std::to_string(c.github_max_retries)},
        {"window.train_label_days", std::to_string(c.train_label_days)},
        {"window.test_label_days", std::to_string(c.test_label_days)},
        {"dataset.blocking", c.blocking ? "true" : "false"},
        {"dataset.embeddings", to_string(c.embeddings)},
        {"dataset.embeddings_file", c.embeddings_file.string()},
        {"dataset.correlation_threshold", format_double(c.correlation_threshold)},
        {"model.type", ltr::to_string(t.model_type)},
        {"model.target", ltr::to_string(t.target)},
        {"forest.num_trees", std::to_string(t.forest.num_trees)},
        {"forest.features_per_split", std::to_string(t.forest.features_per_split)},
        {"forest.min_leaf", std::to_string(t.forest.min_leaf)},
        {"forest.bag_fraction", format_double(t.forest.bag_fraction)},
        {"mart.num_trees", std::to_string(t.mart.num_trees)},
        {"mart.learning_rate", format_double(t.mart.learning_rate)},
        {"mart.max_leaves", std::to_string(t.mart.max_leaves)},
        {"mart.min_leaf", std::to_string(t.mart.min_leaf)},
        {"coordinate_ascent.restarts", std::to_string(t.coordinate_ascent.restarts)},
        {"coordinate_ascent.step_scale", format_double(t.coordinate_ascent.step_scale)},
        {"coordinate_ascent.tolerance", format_double(t.coordinate_ascent.tolerance)},
        {"coordinate_ascent.max_sweeps", std::to_string(t.coordinate_ascent.max_sweeps)},
        {"coordinate_ascent.k", std::to_string(t.coordinate_ascent.k)},
        {"evaluate.k_values", join_ints(c.k_values)},
        {"importance.repetitions", std::to_string(c.importance_repetitions)},
        {"importance.k", std::to_string(c.importance_k)},
        {"grid.train_days", join_ints(c.grid_train_days)},
        {"grid.test_days", join_ints(c.grid_test_days)},
        {"run.seed", std::to_string(t.rng_seed)},
        {"run.jobs", std::to_string(c.jobs)},
    };
}

void validate(const RunConfig& c) {
    if (c.train_label_days < 1 || c.test_label_days < 1) throw ConfigError("label periods must be at least 1 day");
    if (c.mapping == MappingSource::Offline && c.mapping_file.empty()) {
        throw ConfigError("mining.mapping = offline needs mining.mapping_file");
    }
    if (c.mapping == MappingSource::Api && c.github_repo.find('/') == std::string::npos) {
        throw ConfigError("mining.mapping = api needs mining.github_repo as owner/name");
    }
    if (c.embeddings == EmbeddingSource::External && c.embeddings_file.empty()) {
        throw ConfigError("dataset.embeddings = external needs dataset.embeddings_file");
    }
    if (!(c.correlation_threshold > 0.0 && c.correlation_threshold <= 1.0)) {
        throw ConfigError("dataset.correlation_threshold must be in (0, 1]");
    }
    for (int k : c.k_values) {
        if (k < 1) throw ConfigError("evaluate.k_values must be positive");
    }
    if (c.importance_repetitions < 1) throw ConfigError("importance.repetitions must be at least 1");
    if (c.importance_k < 1) throw ConfigError("importance.k must be at least 1");
    for (int d : c.grid_train_days) {
        if (d < 1) throw ConfigError("grid.train_days must be positive");
    }
    for (int d : c.grid_test_days) {
        if (d < 1) throw ConfigError("grid.test_days must be positive");
    }
    c.train.validate();
}

}  // namespace cochange::pipeline
