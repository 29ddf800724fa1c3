#include "support.hpp"


#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "cochange/common/rng.hpp"
#include "cochange/history/subprocess.hpp"

namespace fs = std::filesystem;

namespace cochange::tests {

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "cochange-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

CommandResult run_command(const std::vector<std::string>& argv) {
    const auto r = history::run_process(argv);
    return CommandResult{r.exit_code, r.out, r.err};
}

const fs::path& fixture_repo() {
    static TempDir dir;
    static std::once_flag once;
    std::call_once(once, [] {
        const fs::path repo = dir / "fixture";
        const auto r = run_command({"git", "clone", "-q", COCHANGE_FIXTURE_BUNDLE, repo.string()});
        if (r.status != 0) throw std::runtime_error("cloning the fixture bundle failed: " + r.err);
        run_command({"git", "-C", repo.string(), "fetch", "-q", "--tags", COCHANGE_FIXTURE_BUNDLE});
    });
    static const fs::path repo = dir / "fixture";
    return repo;
}

std::string fixture_sha(const std::string& tag) {
    const auto r = run_command({"git", "-C", fixture_repo().string(), "rev-parse", tag + "^{commit}"});
    if (r.status != 0) throw std::runtime_error("unknown fixture tag " + tag);
    return r.out.substr(0, 40);
}

fs::path cochange_executable() { return COCHANGE_EXECUTABLE; }

Instant at(const std::string& iso) { return parse_iso8601(iso); }

analysis::MethodRecord make_method(const std::string& file_path, const std::string& type_name,
                                   const std::string& name, std::vector<analysis::Parameter> params,
                                   const std::string& body) {
    analysis::MethodRecord m;
    m.file_path = file_path;
    m.type_name = type_name;
    m.name = name;
    m.params = std::move(params);
    const auto slash = file_path.rfind('/');
    std::string dir = slash == std::string::npos ? "" : file_path.substr(0, slash);
    const auto java = dir.find("java/");
    if (java != std::string::npos) dir = dir.substr(java + 5);
    for (char& c : dir) {
        if (c == '/') c = '.';
    }
    m.package = dir;
    m.body_source = body.empty() ? "void " + name + "() {\n    return;\n}" : body;
    m.line_span = {1, 3};
    m.is_test = file_path.find("/test/") != std::string::npos;
    m.method_id = analysis::identity_of(m);
    return m;
}

dataset::RankingList make_list(const std::string& query, const std::vector<int>& labels,
                               const std::vector<int>& co_change) {
    dataset::RankingList list;
    list.query = MethodId(query);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        dataset::Candidate c;
        c.id = MethodId("c" + std::to_string(i));
        c.label = labels[i];
        if (i < co_change.size()) c.features.co_change_count = co_change[i];
        list.candidates.push_back(c);
    }
    return list;
}

PlantedProject make_planted_project(const PlantedOptions& options) {
    Rng rng(options.seed);
    PlantedProject p;
    p.t_s = at("2020-01-01T00:00:00Z");
    const Instant end = p.t_s + Days{options.days};
    const auto clusters = static_cast<std::size_t>(options.clusters);
    const auto per_cluster = static_cast<std::size_t>(options.methods_per_cluster);

    // Most methods exist from the start; the others are added later.
    const std::size_t total = clusters * per_cluster;
    std::vector<Instant> born(total, p.t_s);
    const double span_seconds = std::max(1, options.days - 180) * 86400.0;
    for (auto& b : born) {
        if (rng.uniform01() < options.late_fraction) {
            b = p.t_s + std::chrono::seconds{static_cast<std::int64_t>(rng.uniform01() * span_seconds)};
        }
    }

    // Layout: half of each cluster lives in its home type, the rest in a
    // partner type drawn at random, so types mix several clusters. Methods
    // added later join the home type.
    auto type_name = [](std::size_t t) { return "Unit" + std::to_string(t); };
    auto package_of = [&](std::size_t t) {
        return "app.mod" + std::to_string(t % static_cast<std::size_t>(options.packages));
    };
    const std::vector<std::string> verbs{"load", "store", "parse", "render", "check", "merge", "apply", "build"};
    std::vector<std::vector<std::size_t>> members(clusters);
    std::vector<std::string> names;
    std::vector<std::size_t> type_of;
    for (std::size_t c = 0; c < clusters; ++c) {
        const std::size_t home = c % static_cast<std::size_t>(options.types);
        const std::size_t partner = rng.uniform_index(static_cast<std::size_t>(options.types));
        for (std::size_t j = 0; j < per_cluster; ++j) {
            const std::size_t i = names.size();
            members[c].push_back(i);
            names.push_back(verbs[j % verbs.size()] + std::to_string(c));
            type_of.push_back(j < per_cluster / 2 || born[i] > p.t_s ? home : partner);
        }
    }

    // Calls: a chain through each cluster, a call from every late method to
    // a mate, and some calls to strangers.
    std::vector<std::vector<std::size_t>> calls(total);
    for (const auto& m : members) {
        for (std::size_t j = 0; j + 1 < m.size(); ++j) {
            if (rng.uniform01() < options.chain_call_rate) calls[m[j]].push_back(m[j + 1]);
        }
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (born[m[j]] == p.t_s) continue;
            const std::size_t mate = m[(j + 1 + rng.uniform_index(m.size() - 1)) % m.size()];
            if (std::find(calls[m[j]].begin(), calls[m[j]].end(), mate) == calls[m[j]].end()) calls[m[j]].push_back(mate);
        }
    }
    for (std::size_t i = 0; i < total; ++i) {
        if (rng.uniform01() < options.stranger_call_rate) {
            const std::size_t other = rng.uniform_index(total);
            if (other != i) calls[i].push_back(other);
        }
    }
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t t = type_of[i];
        std::string body = "int " + names[i] + "(int value) {\n    int acc = value * " + std::to_string(i % 7 + 2) + ";\n";
        for (auto callee : calls[i]) body += "    acc += " + names[callee] + "(acc);\n";
        body += "    return acc;\n}";
        std::string dir = package_of(t);
        std::replace(dir.begin(), dir.end(), '.', '/');
        auto m = make_method("src/main/java/" + dir + "/" + type_name(t) + ".java", type_name(t), names[i],
                             {{"int", "value"}}, body);
        m.package = package_of(t);
        m.method_id = analysis::identity_of(m);
        p.methods.push_back(std::move(m));
    }
    for (std::size_t c = 0; c < clusters; ++c) {
        for (auto i : members[c]) p.cluster_of[p.methods[i].method_id] = static_cast<int>(c);
    }

    // How readily each member joins its cluster's edits.
    std::vector<double> weight(total);
    for (auto& w : weight) w = rng.uniform(options.min_participation, 1.0);

    const std::vector<std::string> authors{"ana@x.io", "ben@x.io", "cai@x.io", "dee@x.io", "eli@x.io", "fay@x.io"};
    std::vector<history::MethodChangeEvent> events;
    int serial = 0;
    auto emit = [&](Instant when, std::vector<std::size_t> chosen) {
        std::erase_if(chosen, [&](std::size_t i) { return when < born[i]; });
        if (chosen.empty()) return;
        history::ChangeSet cs;
        cs.cs_id = "PR-" + std::to_string(++serial);
        cs.merged_at = when;
        const std::string sha = "sha" + std::to_string(serial);
        cs.commit_shas.insert(sha);
        cs.source = history::ChangeSetSource::OfflineMapping;
        const std::string& author = authors[rng.uniform_index(authors.size())];
        for (auto i : chosen) {
            if (cs.changed_method_ids.insert(p.methods[i].method_id).second) {
                events.push_back({p.methods[i].method_id, cs.cs_id, sha, author, when});
            }
        }
        p.change_sets.push_back(std::move(cs));
    };
    auto random_time = [&] {
        return p.t_s + std::chrono::seconds{static_cast<std::int64_t>(rng.uniform01() * options.days * 86400.0)};
    };

    // Coupled edits.
    for (std::size_t c = 0; c < clusters; ++c) {
        const int count = static_cast<int>(rng.uniform(0.5, 1.5) * options.days / options.coupling_interval_days);
        for (int e = 0; e < count; ++e) {
            std::vector<std::size_t> chosen;
            for (auto i : members[c]) {
                if (rng.uniform01() < weight[i]) chosen.push_back(i);
            }
            if (chosen.size() >= 2) emit(random_time(), chosen);
        }
    }
    // Bulk edits touching unrelated methods.
    for (int e = 0; e < static_cast<int>(options.days * options.bulk_edits_per_day); ++e) {
        std::vector<std::size_t> chosen;
        const std::size_t size = 2 + rng.uniform_index(5);
        for (std::size_t k = 0; k < size; ++k) chosen.push_back(rng.uniform_index(p.methods.size()));
        emit(random_time(), chosen);
    }
    // Creation and solo edits keep every method active.
    for (std::size_t i = 0; i < p.methods.size(); ++i) {
        emit(born[i], {i});
        for (int e = 0; e < options.days / 120; ++e) emit(random_time(), {i});
    }

    std::stable_sort(p.change_sets.begin(), p.change_sets.end(), [](const auto& x, const auto& y) {
        return x.merged_at != y.merged_at ? x.merged_at < y.merged_at : x.cs_id < y.cs_id;
    });
    p.histories = history::build_edit_histories(p.change_sets, events);
    p.last = end - std::chrono::seconds{1};
    for (const auto& cs : p.change_sets) p.last = std::max(p.last, cs.merged_at);
    std::sort(p.methods.begin(), p.methods.end(),
              [](const auto& x, const auto& y) { return x.method_id < y.method_id; });
    return p;
}

}  // namespace cochange::tests
