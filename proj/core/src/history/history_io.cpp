#include "cochange/history/history_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "cochange/common/error.hpp"

namespace cochange::history {

using nlohmann::json;

namespace {

template <typename Fn>
void for_each_row(std::istream& in, const std::string& origin, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            fn(json::parse(line));
        } catch (const json::exception& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

}  // namespace

void write_change_sets_jsonl(std::ostream& out, std::span<const ChangeSet> change_sets) {
    for (const auto& cs : change_sets) {
        json methods = json::array();
        for (const auto& id : cs.changed_method_ids) methods.push_back(id.value);
        const json row{{"cs_id", cs.cs_id},
                       {"merged_at", to_iso8601(cs.merged_at)},
                       {"commits", std::vector<std::string>(cs.commit_shas.begin(), cs.commit_shas.end())},
                       {"source", to_string(cs.source)},
                       {"methods", std::move(methods)}};
        out << row.dump() << '\n';
    }
}

std::vector<ChangeSet> read_change_sets_jsonl(std::istream& in, const std::string& origin) {
    std::vector<ChangeSet> out;
    for_each_row(in, origin, [&](const json& row) {
        ChangeSet cs;
        cs.cs_id = row.at("cs_id").get<std::string>();
        cs.merged_at = parse_iso8601(row.at("merged_at").get<std::string>());
        for (const auto& sha : row.at("commits")) cs.commit_shas.insert(sha.get<std::string>());
        if (cs.commit_shas.empty()) throw SchemaError("change set " + cs.cs_id + " has no commits");
        cs.source = parse_change_set_source(row.at("source").get<std::string>());
        if (row.contains("methods")) {
            for (const auto& id : row.at("methods")) cs.changed_method_ids.insert(MethodId{id.get<std::string>()});
        }
        out.push_back(std::move(cs));
    });
    return out;
}

void write_histories_jsonl(std::ostream& out, const EditHistories& histories) {
    for (const auto& [id, h] : histories) {
        json events = json::array();
        for (const auto& e : h.events) {
            events.push_back({{"cs_id", e.cs_id},
                              {"commit", e.commit_sha},
                              {"author", e.author},
                              {"timestamp", to_iso8601(e.timestamp)}});
        }
        out << json{{"method_id", id.value}, {"events", std::move(events)}}.dump() << '\n';
    }
}

EditHistories read_histories_jsonl(std::istream& in, const std::string& origin) {
    EditHistories out;
    for_each_row(in, origin, [&](const json& row) {
        MethodEditHistory h;
        h.method_id = MethodId{row.at("method_id").get<std::string>()};
        for (const auto& e : row.at("events")) {
            MethodChangeEvent ev{h.method_id, e.at("cs_id").get<std::string>(), e.at("commit").get<std::string>(),
                                 e.at("author").get<std::string>(),
                                 parse_iso8601(e.at("timestamp").get<std::string>())};
            h.authors.insert(ev.author);
            h.events.push_back(std::move(ev));
        }
        out[h.method_id] = std::move(h);
    });
    return out;
}

void write_commits_jsonl(std::ostream& out, std::span<const CommitRecord> commits) {
    for (const auto& c : commits) {
        json changes = json::array();
        for (const auto& ch : c.changes) {
            json row{{"status", std::string(1, ch.status)}, {"path", ch.path}};
            if (!ch.old_path.empty()) row["old_path"] = ch.old_path;
            changes.push_back(std::move(row));
        }
        out << json{{"sha", c.sha},
                    {"author", c.author},
                    {"timestamp", to_iso8601(c.timestamp)},
                    {"parents", c.parent_shas},
                    {"changed_files", c.changed_files},
                    {"changes", std::move(changes)}}
                   .dump()
            << '\n';
    }
}

std::vector<CommitRecord> read_commits_jsonl(std::istream& in, const std::string& origin) {
    std::vector<CommitRecord> out;
    for_each_row(in, origin, [&](const json& row) {
        CommitRecord c;
        c.sha = row.at("sha").get<std::string>();
        c.author = row.at("author").get<std::string>();
        c.timestamp = parse_iso8601(row.at("timestamp").get<std::string>());
        c.parent_shas = row.at("parents").get<std::vector<std::string>>();
        c.changed_files = row.at("changed_files").get<std::vector<std::string>>();
        for (const auto& ch : row.at("changes")) {
            const auto status = ch.at("status").get<std::string>();
            if (status.size() != 1) throw SchemaError("bad change status '" + status + "'");
            c.changes.push_back(FileChange{status[0], ch.at("path").get<std::string>(),
                                           ch.value("old_path", std::string{})});
        }
        out.push_back(std::move(c));
    });
    return out;
}

void write_mapping_jsonl(std::ostream& out, const PullRequestMapping& mapping) {
    for (const auto& e : mapping.entries) {
        out << json{{"cs_id", e.cs_id}, {"commits", e.commits}}.dump() << '\n';
    }
}

PullRequestMapping read_mapping_jsonl(std::istream& in, const std::string& origin) {
    PullRequestMapping mapping;
    for_each_row(in, origin, [&](const json& row) {
        mapping.entries.push_back(
            MappingEntry{row.at("cs_id").get<std::string>(), row.at("commits").get<std::vector<std::string>>()});
    });
    return mapping;
}

}  // namespace cochange::history
