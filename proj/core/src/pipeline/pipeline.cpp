#include "cochange/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/spdlog.h>

#include "cochange/analysis/embedding.hpp"
#include "cochange/analysis/methods_io.hpp"
#include "cochange/common/hash.hpp"
#include "cochange/common/text.hpp"
#include "cochange/dataset/builder.hpp"
#include "cochange/dataset/correlation.hpp"
#include "cochange/dataset/dataset_io.hpp"
#include "cochange/eval/baselines.hpp"
#include "cochange/eval/evaluate.hpp"
#include "cochange/eval/grid.hpp"
#include "cochange/eval/importance.hpp"
#include "cochange/eval/wilcoxon.hpp"
#include "cochange/history/github.hpp"
#include "cochange/history/history_io.hpp"
#include "cochange/history/miner.hpp"
#include "cochange/ltr/model.hpp"
#include "cochange/ltr/train.hpp"

namespace cochange::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kArtifactFormatVersion = 1;

class Pipeline::Log {
public:
    explicit Log(const fs::path& file) {
        fs::create_directories(file.parent_path());
        auto sink = std::make_shared<spdlog::sinks::basic_file_sink_mt>(file.string(), false);
        logger_ = std::make_shared<spdlog::logger>("cochange", std::move(sink));
        logger_->set_pattern("%Y-%m-%dT%H:%M:%S%z [%l] %v");
        logger_->flush_on(spdlog::level::info);
    }
    void info(const std::string& message) { logger_->info(message); }
    void warn(const std::string& message) { logger_->warn(message); }

private:
    std::shared_ptr<spdlog::logger> logger_;
};

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DataError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

template <typename Writer>
std::string render(Writer&& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

json parse_json_file(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void check_version(const json& doc, const fs::path& path) {
    const int v = doc.value("format_version", 0);
    if (v != kArtifactFormatVersion) {
        throw SchemaError(path.string() + ": unsupported format_version " + std::to_string(v) + " (expected " +
                          std::to_string(kArtifactFormatVersion) + ")");
    }
}

json ndcg_summary_json(const eval::EvalReport& r) {
    json out = json::object();
    for (const auto& [k, s] : r.per_project) out[std::to_string(k)] = {{"mean", s.mean}, {"median", s.median}};
    return out;
}

json report_json(const eval::EvalReport& r) {
    json per_query = json::array();
    for (const auto& q : r.per_query) {
        json ndcg = json::object();
        for (const auto& [k, v] : q.ndcg) ndcg[std::to_string(k)] = v;
        per_query.push_back({{"query", q.query.value}, {"ndcg", std::move(ndcg)}});
    }
    return json{{"ranker", r.ranker},
                {"k_values", r.k_values},
                {"per_query", std::move(per_query)},
                {"per_project", ndcg_summary_json(r)},
                {"gain_capped", r.gain_capped}};
}

json significance_json(const eval::SignificanceResult& s) {
    return json{{"statistic", s.statistic},     {"w_plus", s.w_plus},   {"w_minus", s.w_minus},
                {"n_effective", s.n_effective}, {"p_value", s.p_value}, {"method", eval::to_string(s.method)}};
}

std::string fixed(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string describe(const analysis::MethodRecord& m) {
    std::string params;
    for (std::size_t i = 0; i < m.params.size(); ++i) params += (i ? ", " : "") + m.params[i].type;
    return m.file_path + ":" + std::to_string(m.line_span.start) + "  " + m.type_name + "." + m.name + "(" + params +
           ")";
}

Instant first_commit_time(const std::vector<history::CommitRecord>& commits) {
    Instant t = kDistantFuture;
    for (const auto& c : commits) t = std::min(t, c.timestamp);
    return t;
}

Instant last_commit_time(const std::vector<history::CommitRecord>& commits) {
    Instant t = kDistantPast;
    for (const auto& c : commits) t = std::max(t, c.timestamp);
    return t;
}

json window_json(const dataset::WindowConfig& w) {
    return json{{"t_s", to_iso8601(w.t_s)}, {"t_d", to_iso8601(w.t_d)}, {"t_e", to_iso8601(w.t_e)}};
}

/// Shared state of the stages: manifests, provenance, and the mined inputs.
class Stages {
public:
    Stages(const RunConfig& config, Pipeline::Log& log) : config_(config), log_(log) {}

    fs::path path(const std::string& name) const { return config_.output_dir / name; }
    fs::path manifest_path(const std::string& stage) const {
        return config_.output_dir / artifact::kManifests / (stage + ".json");
    }

    json settings(std::initializer_list<const char*> prefixes) const {
        json out = json::object();
        for (const auto& [key, value] : settings_of(config_)) {
            for (const char* p : prefixes) {
                if (starts_with(key, p)) out[key] = value;
            }
        }
        return out;
    }

    fs::path require(const std::string& name, const std::string& producer) const {
        const fs::path p = path(name);
        if (!fs::exists(p)) {
            throw MissingArtifactError("missing " + p.string() + "; run `cochange " + producer + "` first");
        }
        return p;
    }

    json require_manifest(const std::string& stage) const {
        const fs::path p = manifest_path(stage);
        if (!fs::exists(p)) {
            throw MissingArtifactError("missing " + p.string() + "; run `cochange " + stage + "` first");
        }
        json doc = parse_json_file(p);
        check_version(doc, p);
        return doc;
    }

    /// Hashes of named files, which must exist.
    json hashes(const std::vector<std::pair<std::string, std::string>>& files) const {
        json out = json::object();
        for (const auto& [name, producer] : files) out[name] = sha256_file(require(name, producer));
        return out;
    }

    static json provenance(const std::string& stage, const json& settings, const json& inputs) {
        const json key_doc{{"stage", stage}, {"config", settings}, {"inputs", inputs}};
        return json{{"stage", stage},
                    {"config", settings},
                    {"config_hash", sha256_hex(settings.dump())},
                    {"inputs", inputs},
                    {"key", sha256_hex(key_doc.dump())}};
    }

    bool up_to_date(const std::string& stage, const json& prov) const {
        const fs::path p = manifest_path(stage);
        if (!fs::exists(p)) return false;
        json doc;
        try {
            doc = json::parse(read_text(p));
        } catch (const std::exception&) {
            return false;
        }
        if (doc.value("format_version", 0) != kArtifactFormatVersion) return false;
        if (!doc.contains("provenance") || doc["provenance"].value("key", "") != prov.at("key")) return false;
        const json outputs = doc.value("outputs", json::object());
        for (const auto& [name, hash] : outputs.items()) {
            const fs::path out = path(name);
            if (!fs::exists(out) || sha256_file(out) != hash.get<std::string>()) return false;
        }
        return true;
    }

    void write_manifest(const std::string& stage, const json& prov, const std::vector<std::string>& outputs,
                        const std::vector<std::string>& summary) const {
        json hashes = json::object();
        for (const auto& name : outputs) hashes[name] = sha256_file(path(name));
        const json doc{{"format_version", kArtifactFormatVersion},
                       {"stage", stage},
                       {"provenance", prov},
                       {"outputs", std::move(hashes)},
                       {"summary", summary}};
        write_text(manifest_path(stage), doc.dump(2) + "\n");
    }

    StageResult cached(const std::string& stage) const {
        log_.info(stage + ": up to date");
        const json doc = parse_json_file(manifest_path(stage));
        StageResult r{stage, true, {stage + ": up to date"}};
        for (const auto& line : doc.value("summary", json::array())) r.summary.push_back(line.get<std::string>());
        return r;
    }

    StageResult finish(const std::string& stage, const json& prov, const std::vector<std::string>& outputs,
                       std::vector<std::string> summary) const {
        write_manifest(stage, prov, outputs, summary);
        for (const auto& line : summary) log_.info(stage + ": " + line);
        return StageResult{stage, false, std::move(summary)};
    }

    // Mined inputs ---------------------------------------------------------

    std::vector<history::CommitRecord> commits() const {
        std::ifstream in(require(artifact::kCommits, "mine"));
        return history::read_commits_jsonl(in, path(artifact::kCommits).string());
    }
    std::vector<history::ChangeSet> change_sets() const {
        std::ifstream in(require(artifact::kChangeSets, "mine"));
        return history::read_change_sets_jsonl(in, path(artifact::kChangeSets).string());
    }
    history::EditHistories histories() const {
        std::ifstream in(require(artifact::kHistories, "mine"));
        return history::read_histories_jsonl(in, path(artifact::kHistories).string());
    }
    std::vector<analysis::MethodRecord> head_methods() const {
        std::ifstream in(require(artifact::kMethods, "mine"));
        return analysis::read_methods_jsonl(in, path(artifact::kMethods).string());
    }
    std::string tip() const {
        const json m = require_manifest("mine");
        if (!m.contains("tip") || m["tip"].is_null()) throw DataError("mined history has no commits");
        return m["tip"].get<std::string>();
    }

    std::vector<json::value_type> dummy() const { return {}; }

    fs::path snapshot_path(const std::string& revision) const {
        return config_.output_dir / artifact::kSnapshots / (revision + ".jsonl");
    }

    /// Methods at `revision`, extracted from the repository on first use and
    /// cached under snapshots/.
    std::vector<analysis::MethodRecord> snapshot(const std::string& revision) const {
        const fs::path p = snapshot_path(revision);
        if (fs::exists(p)) {
            std::ifstream in(p);
            return analysis::read_methods_jsonl(in, p.string());
        }
        fs::path repo_path = config_.repo_path;
        if (repo_path.empty() && fs::exists(manifest_path("mine"))) {
            const json m = parse_json_file(manifest_path("mine"));
            repo_path = m.at("provenance").at("config").value("repo.path", "");
        }
        if (repo_path.empty()) {
            throw MissingArtifactError("snapshot " + revision + " is not cached and repo.path is not set");
        }
        const auto repo = history::GitRepository::open(repo_path);
        auto snap = history::load_snapshot(repo, revision, config_.jobs);
        for (const auto& w : snap.warnings) log_.warn(revision + ": " + w);
        write_text(p, render([&](std::ostream& out) { analysis::write_methods_jsonl(out, snap.methods); }));
        return std::move(snap.methods);
    }

    std::optional<analysis::ExternalEmbeddings> embeddings() const {
        if (config_.embeddings != EmbeddingSource::External) return std::nullopt;
        return analysis::ExternalEmbeddings::load(config_.embeddings_file);
    }

    json embeddings_input() const {
        if (config_.embeddings != EmbeddingSource::External) return nullptr;
        if (!fs::exists(config_.embeddings_file)) {
            throw ConfigError("embeddings file " + config_.embeddings_file.string() + " does not exist");
        }
        return sha256_file(config_.embeddings_file);
    }

    const RunConfig& config() const { return config_; }
    Pipeline::Log& log() const { return log_; }

private:
    const RunConfig& config_;
    Pipeline::Log& log_;
};

std::string model_json_with_provenance(const ltr::TrainedModel& model, const json& prov) {
    json doc = json::parse(ltr::model_to_json(model));
    doc["provenance"] = prov;
    return doc.dump() + "\n";
}

}  // namespace

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {
    validate(config_);
    if (!config_.repo_path.empty()) config_.repo_path = fs::absolute(config_.repo_path).lexically_normal();
    config_.train.jobs = config_.jobs;
    fs::create_directories(config_.output_dir);
    log_ = std::make_unique<Log>(config_.output_dir / artifact::kLog);
}

Pipeline::~Pipeline() = default;

StageResult Pipeline::mine() {
    Stages s(config_, *log_);
    if (config_.repo_path.empty()) throw ConfigError("repo.path is not set (use --repo)");
    const auto repo = history::GitRepository::open(config_.repo_path);
    const auto head = repo.head();
    if (!head) throw DataError(config_.repo_path.string() + ": repository has no commits");

    json inputs{{"head", *head}};
    std::optional<history::PullRequestMapping> api_mapping;
    std::optional<history::PullRequestMapping> offline_mapping;
    if (config_.mapping == MappingSource::Offline) {
        if (!fs::exists(config_.mapping_file)) {
            throw ConfigError("mapping file " + config_.mapping_file.string() + " does not exist");
        }
        inputs["mapping_file"] = sha256_file(config_.mapping_file);
        std::ifstream in(config_.mapping_file);
        offline_mapping = history::read_mapping_jsonl(in, config_.mapping_file.string());
    } else if (config_.mapping == MappingSource::Api) {
        const auto slash = config_.github_repo.find('/');
        const char* token = std::getenv("GITHUB_TOKEN");
        auto transport = history::make_http_transport(config_.github_api_url);
        history::GitHubClientOptions options;
        options.max_retries = config_.github_max_retries;
        api_mapping = history::fetch_pull_request_mapping(*transport, config_.github_repo.substr(0, slash),
                                                          config_.github_repo.substr(slash + 1), token ? token : "",
                                                          options);
        const std::string text =
            render([&](std::ostream& out) { history::write_mapping_jsonl(out, *api_mapping); });
        write_text(s.path(artifact::kMapping), text);
        inputs["api_mapping"] = sha256_hex(text);
    }
    const json prov = Stages::provenance("mine", s.settings({"repo.", "mining.", "window."}), inputs);
    if (s.up_to_date("mine", prov)) return s.cached("mine");

    history::MiningOptions options;
    if (config_.until) options.until = parse_iso8601(*config_.until);
    options.api_mapping = std::move(api_mapping);
    options.offline_mapping = std::move(offline_mapping);
    options.jobs = config_.jobs;
    const auto mined = history::mine_repository(repo, options);
    for (const auto& w : mined.warnings) log_->warn("mine: " + w);

    std::vector<std::string> outputs{artifact::kCommits, artifact::kChangeSets, artifact::kHistories,
                                     artifact::kMethods};
    if (config_.mapping == MappingSource::Api) outputs.emplace_back(artifact::kMapping);
    write_text(s.path(artifact::kCommits),
               render([&](std::ostream& out) { history::write_commits_jsonl(out, mined.commits); }));
    write_text(s.path(artifact::kChangeSets),
               render([&](std::ostream& out) { history::write_change_sets_jsonl(out, mined.change_sets); }));
    write_text(s.path(artifact::kHistories),
               render([&](std::ostream& out) { history::write_histories_jsonl(out, mined.histories); }));

    const auto tip = history::scan_tip(mined.commits, head);
    std::vector<analysis::MethodRecord> methods;
    if (tip) {
        auto snap = history::load_snapshot(repo, *tip, config_.jobs);
        for (const auto& w : snap.warnings) log_->warn("mine: " + w);
        methods = std::move(snap.methods);
    }
    write_text(s.path(artifact::kMethods),
               render([&](std::ostream& out) { analysis::write_methods_jsonl(out, methods); }));

    std::vector<std::string> summary{
        std::to_string(mined.commits.size()) + " commits", std::to_string(mined.change_sets.size()) + " change sets",
        std::to_string(mined.histories.size()) + " methods with edit history",
        std::to_string(methods.size()) + " methods at " + tip.value_or("(none)")};
    if (!mined.warnings.empty()) summary.push_back(std::to_string(mined.warnings.size()) + " warnings (see run.log)");

    if (tip) {
        try {
            const auto windows = dataset::split_windows(first_commit_time(mined.commits),
                                                        last_commit_time(mined.commits), config_.train_label_days,
                                                        config_.test_label_days);
            for (const auto& w : {windows.train, windows.test}) {
                if (auto rev = history::revision_before(mined.commits, *tip, w.t_d)) {
                    const std::string name = std::string(artifact::kSnapshots) + "/" + *rev + ".jsonl";
                    auto snap = history::load_snapshot(repo, *rev, config_.jobs);
                    write_text(s.path(name),
                               render([&](std::ostream& out) { analysis::write_methods_jsonl(out, snap.methods); }));
                    if (std::find(outputs.begin(), outputs.end(), name) == outputs.end()) outputs.push_back(name);
                }
            }
        } catch (const dataset::HistoryTooShortError& e) {
            summary.push_back(std::string("window snapshots skipped: ") + e.what());
        }
    }

    s.write_manifest("mine", prov, outputs, summary);
    json manifest = parse_json_file(s.manifest_path("mine"));
    manifest["tip"] = tip ? json(*tip) : json(nullptr);
    write_text(s.manifest_path("mine"), manifest.dump(2) + "\n");
    for (const auto& line : summary) log_->info("mine: " + line);
    return StageResult{"mine", false, summary};
}

StageResult Pipeline::build_datasets() {
    Stages s(config_, *log_);
    const json mine_manifest = s.require_manifest("mine");
    json inputs{{"mine", mine_manifest.at("outputs")}, {"embeddings", s.embeddings_input()}};
    const json prov = Stages::provenance("dataset", s.settings({"window.", "dataset."}), inputs);
    if (s.up_to_date("dataset", prov)) return s.cached("dataset");

    const auto commits = s.commits();
    const auto change_sets = s.change_sets();
    const auto histories = s.histories();
    const std::string tip = s.tip();
    const auto windows = dataset::split_windows(first_commit_time(commits), last_commit_time(commits),
                                                config_.train_label_days, config_.test_label_days);
    const auto embeddings = s.embeddings();

    dataset::BuildOptions options;
    options.blocking = config_.blocking;
    options.jobs = config_.jobs;
    options.embeddings = embeddings ? &*embeddings : nullptr;

    auto build = [&](const dataset::WindowConfig& w, std::string& revision, dataset::BuildReport& report) {
        auto rev = history::revision_before(commits, tip, w.t_d);
        if (!rev) throw DataError("no commit before " + to_iso8601(w.t_d));
        revision = *rev;
        const auto methods = s.snapshot(revision);
        return dataset::build_dataset(methods, histories, change_sets, w, options, &report);
    };
    std::string train_rev;
    std::string test_rev;
    dataset::BuildReport train_report;
    dataset::BuildReport test_report;
    const auto train = build(windows.train, train_rev, train_report);
    const auto test = build(windows.test, test_rev, test_report);
    if (train.empty()) throw DataError("no training data: " + train_report.note);

    const auto schema = dataset::prune_correlated_features(train, config_.correlation_threshold);

    write_text(s.path(artifact::kTrainSet), render([&](std::ostream& o) { dataset::write_dataset_jsonl(o, train); }));
    write_text(s.path(artifact::kTestSet), render([&](std::ostream& o) { dataset::write_dataset_jsonl(o, test); }));
    write_text(s.path(artifact::kTrainLetor),
               render([&](std::ostream& o) { dataset::write_letor(o, train, schema); }));
    write_text(s.path(artifact::kTestLetor), render([&](std::ostream& o) { dataset::write_letor(o, test, schema); }));

    json schema_doc = json::parse(dataset::schema_to_json(schema));
    schema_doc["format_version"] = kArtifactFormatVersion;
    schema_doc["provenance"] = prov;
    write_text(s.path(artifact::kSchema), schema_doc.dump(2) + "\n");

    auto report_json = [](const dataset::BuildReport& r) {
        return json{{"snapshot_methods", r.snapshot_methods},
                    {"test_methods", r.test_methods},
                    {"methods_without_history", r.methods_without_history},
                    {"valid_methods", r.valid_methods},
                    {"lists_all_zero", r.lists_all_zero},
                    {"lists_emitted", r.lists_emitted},
                    {"note", r.note}};
    };
    json train_window = window_json(windows.train);
    train_window["revision"] = train_rev;
    train_window["build"] = report_json(train_report);
    json test_window = window_json(windows.test);
    test_window["revision"] = test_rev;
    test_window["build"] = report_json(test_report);
    const json windows_doc{{"format_version", kArtifactFormatVersion},
                           {"train", std::move(train_window)},
                           {"test", std::move(test_window)},
                           {"provenance", prov}};
    write_text(s.path(artifact::kWindows), windows_doc.dump(2) + "\n");

    std::string dropped;
    for (const auto& d : schema.dropped) dropped += (dropped.empty() ? "" : ", ") + d.name;
    std::vector<std::string> summary{
        "train window " + to_iso8601(windows.train.t_d) + " .. " + to_iso8601(windows.train.t_e) + ": " +
            std::to_string(train.size()) + " ranking lists (" + std::to_string(train_report.valid_methods) +
            " valid methods)",
        "test window " + to_iso8601(windows.test.t_d) + " .. " + to_iso8601(windows.test.t_e) + ": " +
            std::to_string(test.size()) + " ranking lists (" + std::to_string(test_report.valid_methods) +
            " valid methods)",
        "features: " + std::to_string(schema.features.size()) + " kept" +
            (dropped.empty() ? "" : ", dropped " + dropped)};
    return s.finish("dataset", prov,
                    {artifact::kTrainSet, artifact::kTestSet, artifact::kTrainLetor, artifact::kTestLetor,
                     artifact::kSchema, artifact::kWindows},
                    summary);
}

StageResult Pipeline::train() {
    Stages s(config_, *log_);
    const json inputs = s.hashes({{artifact::kTrainSet, "dataset"}, {artifact::kSchema, "dataset"}});
    const json prov = Stages::provenance(
        "train", s.settings({"model.", "forest.", "mart.", "coordinate_ascent.", "run.seed"}), inputs);
    if (s.up_to_date("train", prov)) return s.cached("train");

    const json schema_doc = parse_json_file(s.path(artifact::kSchema));
    check_version(schema_doc, s.path(artifact::kSchema));
    const auto schema = dataset::schema_from_json(schema_doc.dump(), s.path(artifact::kSchema).string());
    std::ifstream in(s.path(artifact::kTrainSet));
    const auto lists = dataset::read_dataset_jsonl(in, s.path(artifact::kTrainSet).string());

    ltr::CoordinateAscentTrace trace;
    const auto model = ltr::train(lists, schema.features, config_.train, &trace);
    write_text(s.path(artifact::kModel), model_json_with_provenance(model, prov));

    std::vector<std::string> summary{ltr::to_string(model.model_type) + " trained on " +
                                     std::to_string(lists.size()) + " ranking lists with " +
                                     std::to_string(schema.features.size()) + " features"};
    if (config_.train.model_type == ltr::ModelType::CoordinateAscent) {
        for (std::size_t r = 0; r < trace.initial.size(); ++r) {
            summary.push_back("restart " + std::to_string(r) + ": NDCG@" +
                              std::to_string(config_.train.coordinate_ascent.k) + " " + fixed(trace.initial[r]) +
                              " -> " + fixed(trace.final[r]));
        }
    }
    return s.finish("train", prov, {artifact::kModel}, summary);
}

StageResult Pipeline::evaluate() {
    Stages s(config_, *log_);
    const json inputs = s.hashes({{artifact::kModel, "train"}, {artifact::kTestSet, "dataset"}, {artifact::kWindows, "dataset"}});
    const json prov = Stages::provenance("evaluate", s.settings({"evaluate."}), inputs);
    if (s.up_to_date("evaluate", prov)) return s.cached("evaluate");

    const auto model = ltr::load_model(s.path(artifact::kModel));
    std::ifstream in(s.path(artifact::kTestSet));
    const auto lists = dataset::read_dataset_jsonl(in, s.path(artifact::kTestSet).string());
    if (lists.empty()) throw DataError("the test dataset has no ranking lists");
    const json windows = parse_json_file(s.path(artifact::kWindows));
    check_version(windows, s.path(artifact::kWindows));
    const auto methods = s.snapshot(windows.at("test").at("revision").get<std::string>());
    std::unordered_map<MethodId, std::string> file_of;
    for (const auto& m : methods) file_of.emplace(m.method_id, m.file_path);

    const auto& ks = config_.k_values;
    const std::vector<std::pair<std::string, eval::Ranker>> rankers{
        {"model", eval::model_ranker(model)},
        {"support", eval::support_ranker()},
        {"file-proximity", eval::file_proximity_ranker(file_of)},
        {"clone", eval::clone_ranker()},
        {"oracle", eval::oracle_ranker()},
    };
    std::map<std::string, eval::EvalReport> reports;
    for (const auto& [name, ranker] : rankers) reports[name] = eval::evaluate(ranker, lists, ks, name, config_.jobs);

    json comparisons = json::array();
    for (const char* baseline : {"support", "file-proximity", "clone"}) {
        for (int k : reports.at("model").k_values) {
            const auto a = reports.at("model").column(k);
            const auto b = reports.at(baseline).column(k);
            comparisons.push_back({{"a", "model"},
                                   {"b", baseline},
                                   {"k", k},
                                   {"mean_a", std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size())},
                                   {"mean_b", std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size())},
                                   {"wilcoxon", significance_json(eval::wilcoxon_signed_rank(a, b))}});
        }
    }
    json rankers_doc = json::object();
    for (const auto& [name, r] : reports) rankers_doc[name] = report_json(r);
    const json doc{{"format_version", kArtifactFormatVersion},
                   {"model", {{"model_type", ltr::to_string(model.model_type)}, {"feature_names", model.feature_names}}},
                   {"dataset", {{"queries", lists.size()}, {"window", windows.at("test")}}},
                   {"k_values", reports.at("model").k_values},
                   {"rankers", std::move(rankers_doc)},
                   {"comparisons", std::move(comparisons)},
                   {"provenance", prov}};
    write_text(s.path(artifact::kReport), doc.dump(2) + "\n");

    std::vector<std::string> summary{std::to_string(lists.size()) + " test queries; mean NDCG@k"};
    std::string header = "  ranker         ";
    for (int k : reports.at("model").k_values) header += "  @" + std::to_string(k) + std::string(k < 10 ? 5 : 4, ' ');
    summary.push_back(header);
    for (const char* name : {"model", "support", "file-proximity", "clone", "oracle"}) {
        std::string line = "  " + std::string(name) + std::string(15 - std::string(name).size(), ' ');
        for (const auto& [k, sm] : reports.at(name).per_project) line += "  " + fixed(sm.mean);
        summary.push_back(line);
    }
    return s.finish("evaluate", prov, {artifact::kReport}, summary);
}

StageResult Pipeline::importance() {
    Stages s(config_, *log_);
    const json inputs = s.hashes({{artifact::kModel, "train"}, {artifact::kTestSet, "dataset"}});
    const json prov = Stages::provenance("importance", s.settings({"importance.", "run.seed"}), inputs);
    if (s.up_to_date("importance", prov)) return s.cached("importance");

    const auto model = ltr::load_model(s.path(artifact::kModel));
    std::ifstream in(s.path(artifact::kTestSet));
    const auto lists = dataset::read_dataset_jsonl(in, s.path(artifact::kTestSet).string());
    if (lists.empty()) throw DataError("the test dataset has no ranking lists");
    const auto report = eval::importance_report(model, lists, config_.seed(), config_.importance_repetitions,
                                                config_.importance_k, config_.jobs);

    json features = json::array();
    for (const auto& f : report.per_feature) features.push_back({{"feature", f.feature}, {"importance", f.importance}});
    const json doc{{"format_version", kArtifactFormatVersion},
                   {"k", report.k},
                   {"baseline_ndcg", report.baseline_ndcg},
                   {"per_feature", std::move(features)},
                   {"shuffle_seed", report.shuffle_seed},
                   {"repetitions", report.repetitions},
                   {"provenance", prov}};
    write_text(s.path(artifact::kImportance), doc.dump(2) + "\n");

    auto sorted = report.per_feature;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.importance > b.importance; });
    std::vector<std::string> summary{"baseline NDCG@" + std::to_string(report.k) + " " + fixed(report.baseline_ndcg)};
    for (const auto& f : sorted) summary.push_back("  " + f.feature + " " + fixed(f.importance));
    return s.finish("importance", prov, {artifact::kImportance}, summary);
}

StageResult Pipeline::grid() {
    Stages s(config_, *log_);
    const json mine_manifest = s.require_manifest("mine");
    const json inputs{{"mine", mine_manifest.at("outputs")}, {"embeddings", s.embeddings_input()}};
    const json prov = Stages::provenance(
        "grid",
        s.settings({"grid.", "dataset.", "model.", "forest.", "mart.", "coordinate_ascent.", "evaluate.", "run.seed"}),
        inputs);
    if (s.up_to_date("grid", prov)) return s.cached("grid");

    const auto commits = s.commits();
    const auto change_sets = s.change_sets();
    const auto histories = s.histories();
    const std::string tip = s.tip();
    const auto embeddings = s.embeddings();
    const Instant t_s = first_commit_time(commits);
    const Instant last = last_commit_time(commits);

    dataset::BuildOptions options;
    options.blocking = config_.blocking;
    options.jobs = config_.jobs;
    options.embeddings = embeddings ? &*embeddings : nullptr;

    std::map<std::string, std::vector<analysis::MethodRecord>> snapshots;
    std::map<std::pair<Instant, Instant>, std::vector<dataset::RankingList>> datasets;
    auto lists_for = [&](const dataset::WindowConfig& w) -> const std::vector<dataset::RankingList>& {
        auto key = std::make_pair(w.t_d, w.t_e);
        auto it = datasets.find(key);
        if (it != datasets.end()) return it->second;
        auto rev = history::revision_before(commits, tip, w.t_d);
        std::vector<dataset::RankingList> lists;
        if (rev) {
            auto snap = snapshots.find(*rev);
            if (snap == snapshots.end()) snap = snapshots.emplace(*rev, s.snapshot(*rev)).first;
            lists = dataset::build_dataset(snap->second, histories, change_sets, w, options);
        }
        return datasets.emplace(key, std::move(lists)).first->second;
    };
    const eval::SplitProvider provider = [&](int train_days, int test_days) {
        const auto w = dataset::split_windows(t_s, last, train_days, test_days);
        dataset::DatasetSplit split;
        split.train_window = w.train;
        split.test_window = w.test;
        split.train = lists_for(w.train);
        split.test = lists_for(w.test);
        return split;
    };
    eval::GridSettings settings;
    settings.train_days = config_.grid_train_days;
    settings.test_days = config_.grid_test_days;
    settings.k_values = config_.k_values;
    settings.jobs = config_.jobs;
    const double threshold = config_.correlation_threshold;
    const auto result = eval::window_experiment(provider, config_.train, settings,
                                                [threshold](std::span<const dataset::RankingList> lists) {
                                                    return dataset::prune_correlated_features(lists, threshold).features;
                                                });

    json cells = json::array();
    std::size_t completed = 0;
    for (const auto& c : result.cells) {
        json cell{{"train_days", c.train_days},
                  {"test_days", c.test_days},
                  {"status", c.skipped ? "skipped" : "ok"},
                  {"train_lists", c.train_lists},
                  {"test_lists", c.test_lists}};
        if (c.skipped) {
            cell["reason"] = c.reason;
        } else {
            ++completed;
            cell["ndcg"] = ndcg_summary_json(*c.report);
            cell["queries"] = c.report->per_query.size();
        }
        cells.push_back(std::move(cell));
    }
    json comparisons = json::array();
    for (const auto& c : result.comparisons) {
        json row{{"train_days_a", c.train_days_a},
                 {"train_days_b", c.train_days_b},
                 {"k", result.compare_k},
                 {"paired_queries", c.paired_queries},
                 {"mean_a", c.mean_a},
                 {"mean_b", c.mean_b}};
        row["wilcoxon"] = c.test ? significance_json(*c.test) : json(nullptr);
        comparisons.push_back(std::move(row));
    }
    const json doc{{"format_version", kArtifactFormatVersion},
                   {"model_type", ltr::to_string(config_.train.model_type)},
                   {"train_days", config_.grid_train_days},
                   {"test_days", config_.grid_test_days},
                   {"attempted", result.cells.size()},
                   {"completed", completed},
                   {"cells", std::move(cells)},
                   {"comparisons", std::move(comparisons)},
                   {"provenance", prov}};
    write_text(s.path(artifact::kGrid), doc.dump(2) + "\n");

    std::vector<std::string> summary{std::to_string(result.cells.size()) + " cells attempted, " +
                                     std::to_string(completed) + " completed, " +
                                     std::to_string(result.cells.size() - completed) + " skipped"};
    for (const auto& c : result.cells) {
        std::string line = "  train " + std::to_string(c.train_days) + "d / test " + std::to_string(c.test_days) + "d: ";
        line += c.skipped ? "skipped (" + c.reason + ")"
                          : "NDCG@" + std::to_string(result.compare_k) + " " +
                                fixed(c.report->per_project.at(result.compare_k).mean);
        summary.push_back(line);
    }
    return s.finish("grid", prov, {artifact::kGrid}, summary);
}

namespace {

bool path_matches(const std::string& file, const std::string& wanted) {
    return file == wanted || ends_with(file, "/" + wanted);
}

const analysis::MethodRecord& resolve_query(const std::vector<analysis::MethodRecord>& methods,
                                            const std::string& query) {
    for (const auto& m : methods) {
        if (m.method_id.value == query) return m;
    }
    std::vector<std::string> suggestions;
    const auto colon = query.rfind(':');
    if (colon != std::string::npos && colon + 1 < query.size() &&
        std::all_of(query.begin() + static_cast<std::ptrdiff_t>(colon) + 1, query.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; })) {
        const std::string file = query.substr(0, colon);
        const int line = std::stoi(query.substr(colon + 1));
        std::set<std::string> files;
        const analysis::MethodRecord* best = nullptr;
        bool ambiguous = false;
        for (const auto& m : methods) {
            if (!path_matches(m.file_path, file)) continue;
            files.insert(m.file_path);
            if (m.line_span.start <= line && line <= m.line_span.end) {
                const int span = m.line_span.end - m.line_span.start;
                if (!best || span < best->line_span.end - best->line_span.start) {
                    best = &m;
                    ambiguous = false;
                } else if (span == best->line_span.end - best->line_span.start) {
                    ambiguous = true;
                }
            }
        }
        if (best && !ambiguous && files.size() == 1) return *best;
        for (const auto& m : methods) {
            if (path_matches(m.file_path, file)) suggestions.push_back(m.method_id.value + "  " + describe(m));
        }
        if (suggestions.size() > 20) suggestions.resize(20);
        const std::string why = files.size() > 1 ? "matches several files" : best ? "is ambiguous"
                                : files.empty()  ? "names no known file"
                                                 : "is not inside a method";
        throw QueryResolutionError("query '" + query + "' " + why, suggestions);
    }
    const std::string lowered = to_lower(query);
    for (const auto& m : methods) {
        if (starts_with(m.method_id.value, query) || to_lower(m.name).find(lowered) != std::string::npos) {
            suggestions.push_back(m.method_id.value + "  " + describe(m));
        }
    }
    if (suggestions.size() > 20) suggestions.resize(20);
    throw QueryResolutionError("unknown method '" + query + "'", suggestions);
}

}  // namespace

RankResult Pipeline::rank(const std::string& query, int k) {
    Stages s(config_, *log_);
    if (k < 1) throw ConfigError("k must be at least 1");
    const auto model = ltr::load_model(s.require(artifact::kModel, "train"));
    const auto methods = s.head_methods();
    const auto commits = s.commits();
    const auto change_sets = s.change_sets();
    const auto histories = s.histories();
    const auto embeddings = s.embeddings();
    const auto& q = resolve_query(methods, query);

    const TimeRange period{first_commit_time(commits), last_commit_time(commits) + std::chrono::seconds{1}};
    const dataset::FeatureContext context(
        dataset::FeatureInputs{methods, &histories, change_sets, period, embeddings ? &*embeddings : nullptr});

    dataset::RankingList list;
    list.query = q.method_id;
    std::vector<const analysis::MethodRecord*> records;
    for (const auto& m : methods) {
        if (m.method_id == q.method_id || m.is_test) continue;
        auto h = histories.find(m.method_id);
        if (h == histories.end() || !h->second.has_event_in(period)) continue;
        list.candidates.push_back(dataset::Candidate{m.method_id, context.compute(q.method_id, m.method_id), 0});
        records.push_back(&m);
    }
    const auto scores = ltr::predict_scores(model, list);
    auto order = ltr::order_by_scores(list, scores);
    order.resize(std::min(order.size(), static_cast<std::size_t>(k)));

    RankResult result;
    result.query = q;
    result.feature_names = model.feature_names;
    for (std::size_t i : order) {
        result.top.push_back(RankedCandidate{*records[i], scores[i], list.candidates[i].features});
    }
    log_->info("rank: " + q.method_id.value + " -> " + std::to_string(result.top.size()) + " candidates");
    return result;
}

std::string RankResult::to_text() const {
    std::ostringstream out;
    out << "query  " << query.method_id << "  " << describe(query) << "\n";
    if (top.empty()) out << "no candidates with edit history\n";
    for (std::size_t i = 0; i < top.size(); ++i) {
        const auto& c = top[i];
        out << (i + 1) << ". " << fixed(c.score) << "  " << c.method.method_id << "  " << describe(c.method) << "\n";
        const auto values = c.features.to_array();
        out << "     ";
        for (const auto& name : feature_names) {
            const auto idx = dataset::feature_index(name);
            out << ' ' << name << '=' << (idx ? fixed(values[*idx], 3) : "?");
        }
        out << "\n";
    }
    return out.str();
}

std::string RankResult::to_json() const {
    json candidates = json::array();
    for (const auto& c : top) {
        const auto values = c.features.to_array();
        json features = json::object();
        for (const auto& name : feature_names) {
            if (auto idx = dataset::feature_index(name)) features[name] = values[*idx];
        }
        candidates.push_back({{"id", c.method.method_id.value},
                              {"file_path", c.method.file_path},
                              {"type_name", c.method.type_name},
                              {"name", c.method.name},
                              {"start_line", c.method.line_span.start},
                              {"score", c.score},
                              {"features", std::move(features)}});
    }
    const json doc{{"query",
                    {{"id", query.method_id.value},
                     {"file_path", query.file_path},
                     {"type_name", query.type_name},
                     {"name", query.name},
                     {"start_line", query.line_span.start}}},
                   {"candidates", std::move(candidates)}};
    return doc.dump(2) + "\n";
}

}  // namespace cochange::pipeline
