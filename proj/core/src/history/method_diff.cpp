#include "cochange/history/method_diff.hpp"

#include <map>
#include <tuple>

#include "cochange/analysis/method_extractor.hpp"
#include "cochange/analysis/normalize.hpp"
#include "cochange/common/text.hpp"

namespace cochange::history {

namespace {

using analysis::MethodRecord;

struct Version {
    bool ok = true;
    std::vector<MethodRecord> methods;
};

Version load(const RevisionReader& reader, const std::string& revision, const std::string& path,
             std::vector<std::string>* warnings) {
    Version v;
    const auto content = reader.read(revision, path);
    if (!content) return v;
    auto analysis = analysis::analyze_java_file(path, *content);
    v.ok = analysis.ok;
    if (!v.ok && warnings) {
        for (auto& w : analysis.warnings) warnings->push_back(revision.substr(0, 12) + " " + std::move(w));
    }
    v.methods = std::move(analysis.methods);
    return v;
}

std::map<MethodId, std::string> by_id(const std::vector<MethodRecord>& methods) {
    std::map<MethodId, std::string> out;
    for (const auto& m : methods) out.try_emplace(m.method_id, analysis::normalized_text(m.body_source));
    return out;
}

using SignatureKey = std::tuple<std::string, std::string, std::vector<std::string>>;

}  // namespace

std::set<MethodId> diff_commit_methods(const CommitRecord& commit, const CommitRecord* parent,
                                       std::span<const FileChange> changes, const RevisionReader& reader,
                                       std::vector<std::string>* warnings) {
    std::set<MethodId> changed;
    for (const FileChange& change : changes) {
        const bool java_new = ends_with(change.path, ".java");
        const bool java_old = !change.old_path.empty() && ends_with(change.old_path, ".java");
        if (!java_new && !java_old) continue;

        const bool removed = change.status == 'D';
        Version after;
        if (!removed && java_new) after = load(reader, commit.sha, change.path, warnings);

        Version before;
        if (parent && change.status != 'A' && change.status != 'C') {
            const std::string& old_path = change.status == 'R' ? change.old_path : change.path;
            if (ends_with(old_path, ".java")) before = load(reader, parent->sha, old_path, warnings);
        }
        if (!after.ok || !before.ok) continue;

        if (change.status == 'R') {
            std::map<SignatureKey, std::string> old_by_signature;
            std::map<SignatureKey, MethodId> old_ids;
            for (const auto& m : before.methods) {
                SignatureKey key{m.type_name, m.name, m.param_types()};
                old_by_signature.try_emplace(key, analysis::normalized_text(m.body_source));
                old_ids.try_emplace(key, m.method_id);
            }
            for (const auto& m : after.methods) {
                SignatureKey key{m.type_name, m.name, m.param_types()};
                auto it = old_by_signature.find(key);
                if (it != old_by_signature.end() && it->second == analysis::normalized_text(m.body_source)) {
                    old_ids.erase(key);
                    continue;
                }
                if (it != old_by_signature.end()) old_ids.erase(key);
                changed.insert(m.method_id);
            }
            for (const auto& [key, id] : old_ids) changed.insert(id);
            continue;
        }

        const auto old_texts = by_id(before.methods);
        const auto new_texts = by_id(after.methods);
        for (const auto& [id, text] : new_texts) {
            auto it = old_texts.find(id);
            if (it == old_texts.end() || it->second != text) changed.insert(id);
        }
        for (const auto& [id, text] : old_texts) {
            if (!new_texts.contains(id)) changed.insert(id);
        }
    }
    return changed;
}

}  // namespace cochange::history
